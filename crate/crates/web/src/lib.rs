//! WebAssembly bindings for the demo page in `www/`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use wasm_bindgen::prelude::*;

use planesat::cnf::{CnfFormula, Lit};
use planesat::encoder::{encode_full_plane, Canonical, FullPlaneOptions};
use planesat::group::{closure_of, orbit, stabilizer};
use planesat::matrix::{Cell, PlaneParams};
use planesat::perm::Permutation;
use planesat::solver::{solve_internal, SolveResult, SolverConfig};
use planesat::symbreak::lex_le_clauses;

const MAX_ORDER: usize = 5;
const MAX_GROUP: usize = 40_320;
const MAX_LISTED: usize = 64;

#[wasm_bindgen]
pub struct PlaneSolution {
    side: usize,
    cells: Vec<u8>,
    variables: u32,
    clauses: usize,
}

#[wasm_bindgen]
impl PlaneSolution {
    #[wasm_bindgen(getter)]
    pub fn side(&self) -> usize {
        self.side
    }

    /// Row-major, 1 for an incidence.
    #[wasm_bindgen(getter)]
    pub fn cells(&self) -> Vec<u8> {
        self.cells.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn variables(&self) -> u32 {
        self.variables
    }

    #[wasm_bindgen(getter)]
    pub fn clauses(&self) -> usize {
        self.clauses
    }
}

/// Encodes and solves a plane of order 2..=5. `canonical` is `none`,
/// `frame` or `normalized`.
#[wasm_bindgen]
pub fn solve_plane(order: usize, canonical: &str) -> Result<PlaneSolution, String> {
    if !(2..=MAX_ORDER).contains(&order) {
        return Err(format!("order must be between 2 and {MAX_ORDER}"));
    }
    let canonical = match canonical {
        "none" => Canonical::None,
        "frame" => Canonical::Frame,
        "normalized" => Canonical::Normalized,
        other => return Err(format!("unknown canonical form {other:?}")),
    };
    let opts = FullPlaneOptions { canonical, ..FullPlaneOptions::default() };
    let enc = encode_full_plane(PlaneParams::new(order), opts).map_err(|e| e.to_string())?;
    let result = solve_internal(&enc.formula, &[], SolverConfig::unbounded()).map_err(|e| e.to_string())?;
    let SolveResult::Sat(model) = result else {
        return Err(format!("no plane of order {order} satisfies the encoding"));
    };
    let m = enc.varmap.decode(&model);
    let mut cells = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        cells.extend(m.row(r).iter().map(|&c| u8::from(c == Cell::One)));
    }
    Ok(PlaneSolution { side: m.rows(), cells, variables: enc.formula.var_count(), clauses: enc.formula.len() })
}

fn parse_bits(text: &str) -> Result<Vec<bool>, String> {
    text.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("{other:?} is not a bit")),
        })
        .collect()
}

fn lex_formula(n: usize) -> Result<(CnfFormula, Vec<Vec<Lit>>), String> {
    let mut f = CnfFormula::new(2 * n as u32);
    let xs: Vec<Lit> = (1..=n as Lit).collect();
    let ys: Vec<Lit> = (n as Lit + 1..=2 * n as Lit).collect();
    let clauses = lex_le_clauses(&mut f, &xs, &ys).map_err(|e| e.to_string())?;
    f.extend_clauses(clauses.clone()).map_err(|e| e.to_string())?;
    Ok((f, clauses))
}

fn lit_name(l: Lit, n: usize) -> String {
    let v = l.unsigned_abs() as usize;
    let name = if v <= n {
        format!("x{v}")
    } else if v <= 2 * n {
        format!("y{}", v - n)
    } else {
        format!("a{}", v - 2 * n)
    };
    if l < 0 {
        format!("¬{name}")
    } else {
        name
    }
}

/// The clauses for `x ≤lex y` over `n` bits, one per line.
#[wasm_bindgen]
pub fn lex_le_listing(n: usize) -> Result<String, String> {
    if !(1..=32).contains(&n) {
        return Err("length must be between 1 and 32".into());
    }
    let (f, clauses) = lex_formula(n)?;
    let mut out = format!("{} clauses, {} auxiliary variables\n", clauses.len(), f.var_count() as usize - 2 * n);
    for c in &clauses {
        let lits: Vec<String> = c.iter().map(|&l| lit_name(l, n)).collect();
        writeln!(out, "{}", lits.join(" ∨ ")).unwrap();
    }
    Ok(out)
}

/// Whether the encoding admits `x` and `y` (bit strings of equal length),
/// next to the direct comparison.
#[wasm_bindgen]
pub fn lex_le_check(x: &str, y: &str) -> Result<String, String> {
    let (xs, ys) = (parse_bits(x)?, parse_bits(y)?);
    if xs.is_empty() || xs.len() != ys.len() {
        return Err("x and y need the same nonzero length".into());
    }
    let n = xs.len();
    let (f, _) = lex_formula(n)?;
    let assumptions: Vec<Lit> =
        xs.iter().chain(&ys).enumerate().map(|(i, &b)| if b { i as Lit + 1 } else { -(i as Lit + 1) }).collect();
    let admitted = solve_internal(&f, &assumptions, SolverConfig::unbounded()).map_err(|e| e.to_string())?.is_sat();
    let direct = xs <= ys;
    Ok(format!(
        "encoding {} the pair; x {} y",
        if admitted { "admits" } else { "rejects" },
        if direct { "≤lex" } else { ">lex" }
    ))
}

/// Orbit and stabilizer of `assignment` (one symbol per point) under the
/// group generated by `generators` (cycle notation, 1-based, one per line).
#[wasm_bindgen]
pub fn orbit_report(generators: &str, assignment: &str) -> Result<String, String> {
    let a: Vec<char> = assignment.trim().chars().collect();
    if a.is_empty() {
        return Err("empty assignment".into());
    }
    let gens = generators
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| Permutation::parse_cycles(a.len(), l).map_err(|e| format!("{l}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let group = closure_of(Permutation::identity(a.len()), &gens, MAX_GROUP).map_err(|e| e.to_string())?;
    let members: BTreeSet<Vec<char>> = orbit(&group, &a);
    let stab = stabilizer(&group, &a);
    let mut out = format!(
        "group {}, orbit {}, stabilizer {} ({} x {} = {})\n",
        group.len(),
        members.len(),
        stab.len(),
        members.len(),
        stab.len(),
        members.len() * stab.len()
    );
    for m in members.iter().take(MAX_LISTED) {
        out.extend(m.iter());
        out.push('\n');
    }
    if members.len() > MAX_LISTED {
        writeln!(out, "… {} more", members.len() - MAX_LISTED).unwrap();
    }
    Ok(out)
}
