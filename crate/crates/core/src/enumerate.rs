//! All-solutions enumeration with blocking clauses, optionally rejecting
//! isomorphs by blocking the whole orbit of every solution found.
//!
//! The solver branches on the lowest unassigned variable, false first, so the
//! discovery order depends only on the formula.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use thiserror::Error;

use crate::cnf::{CnfError, CnfFormula, Lit};
use crate::group::{GroupError, SymmetryGroup};
use crate::process::{self, ProcessError};
use crate::solver::{SolveResult, Solver, SolverConfig, SolverError};
use crate::symbreak::{orbit_of, write_cells, ScopeAction};

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("projection scope is empty")]
    EmptyScope,
    #[error("scope variable {0} is not declared")]
    ScopeVariable(u32),
    #[error("group acts on {got} positions, scope has {expected}")]
    ActionDegree { expected: usize, got: usize },
    #[error("solution limit {0} reached")]
    Limit(usize),
    #[error("external solver output: {0}")]
    External(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Values of the scope variables, in scope order.
pub type Assignment = Vec<bool>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub all_count: usize,
    /// Lex-least member of each orbit, in discovery order.
    pub representatives: Vec<Assignment>,
    pub orbit_sizes: Vec<usize>,
}

impl EnumerationResult {
    /// Manifest lines in the labelling format; the stabilizer size is
    /// `group_size / orbit_size`.
    pub fn to_manifest(&self, scope_cells: &[(usize, usize)], group_size: usize) -> String {
        let mut s = String::new();
        for (k, (rep, &size)) in self.representatives.iter().zip(&self.orbit_sizes).enumerate() {
            write!(s, "label {}: stabilizer {} cells ", k + 1, group_size / size.max(1)).unwrap();
            write_cells(&mut s, scope_cells, rep);
            s.push('\n');
        }
        s
    }
}

fn check_scope(f: &CnfFormula, scope: &[u32]) -> Result<(), EnumerateError> {
    if scope.is_empty() {
        return Err(EnumerateError::EmptyScope);
    }
    match scope.iter().find(|&&v| v == 0 || v > f.var_count()) {
        Some(&v) => Err(EnumerateError::ScopeVariable(v)),
        None => Ok(()),
    }
}

fn blocking_clause(scope: &[u32], values: &[bool]) -> Vec<Lit> {
    scope.iter().zip(values).map(|(&v, &b)| if b { -(v as Lit) } else { v as Lit }).collect()
}

fn enumeration_solver(f: &CnfFormula) -> Result<Solver, EnumerateError> {
    let config = SolverConfig { max_clauses: None, ..SolverConfig::ordered() };
    Ok(Solver::from_formula(f, config)?)
}

/// Every scope projection of a model of `f`, each once, in discovery order.
pub fn enumerate_all(f: &CnfFormula, scope: &[u32]) -> Result<Vec<Assignment>, EnumerateError> {
    enumerate_all_limited(f, scope, usize::MAX)
}

pub fn enumerate_all_limited(f: &CnfFormula, scope: &[u32], limit: usize) -> Result<Vec<Assignment>, EnumerateError> {
    check_scope(f, scope)?;
    let mut solver = enumeration_solver(f)?;
    let mut out = Vec::new();
    while let SolveResult::Sat(model) = solver.solve()? {
        if out.len() == limit {
            return Err(EnumerateError::Limit(limit));
        }
        let values: Assignment = scope.iter().map(|&v| model[v as usize - 1]).collect();
        solver.add_clause(&blocking_clause(scope, &values))?;
        out.push(values);
    }
    Ok(out)
}

/// One representative per orbit of `actions` (permutations of scope positions).
///
/// Every solution found is blocked together with all of its images.
pub fn enumerate_noniso<A: ScopeAction>(
    f: &CnfFormula,
    scope: &[u32],
    actions: &[A],
) -> Result<EnumerationResult, EnumerateError> {
    check_scope(f, scope)?;
    let mut solver = enumeration_solver(f)?;
    let mut result = EnumerationResult { all_count: 0, representatives: Vec::new(), orbit_sizes: Vec::new() };
    while let SolveResult::Sat(model) = solver.solve()? {
        let values: Assignment = scope.iter().map(|&v| model[v as usize - 1]).collect();
        let members = orbit_with(actions, &values);
        for m in &members {
            solver.add_clause(&blocking_clause(scope, m))?;
        }
        result.all_count += members.len();
        result.orbit_sizes.push(members.len());
        result.representatives.push(members.into_iter().next().expect("orbit is nonempty"));
    }
    Ok(result)
}

fn orbit_with<A: ScopeAction>(actions: &[A], values: &[bool]) -> BTreeSet<Assignment> {
    let mut members = orbit_of(actions, values);
    members.insert(values.to_vec());
    members
}

/// [`enumerate_noniso`] with the group given as matrix symmetries acting on
/// the cells behind the scope variables.
pub fn enumerate_noniso_cells(
    f: &CnfFormula,
    scope: &[u32],
    cells: &[(usize, usize)],
    group: &SymmetryGroup,
) -> Result<EnumerationResult, EnumerateError> {
    if cells.len() != scope.len() {
        return Err(EnumerateError::ActionDegree { expected: scope.len(), got: cells.len() });
    }
    let actions = group.cell_actions(cells)?;
    enumerate_noniso(f, scope, &actions)
}

/// Parses solver output: `s SATISFIABLE` / `s UNSATISFIABLE` and `v` lines.
pub fn parse_solver_output(text: &str, var_count: u32) -> Result<Option<Vec<bool>>, EnumerateError> {
    let mut status = None;
    let mut model = vec![false; var_count as usize];
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => true,
                "UNSATISFIABLE" => false,
                other => return Err(EnumerateError::External(format!("unknown status {other:?}"))),
            });
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| EnumerateError::External(format!("bad literal {tok:?}")))?;
                let v = l.unsigned_abs() as usize;
                if l != 0 && v <= model.len() {
                    model[v - 1] = l > 0;
                }
            }
        }
    }
    match status {
        Some(true) => Ok(Some(model)),
        Some(false) => Ok(None),
        None => Err(EnumerateError::External("no status line".into())),
    }
}

/// External-solver loop: writes the formula to `workdir/enum.cnf`, runs
/// `solver_cmd` (placeholder `{cnf}`), parses its model, appends the orbit
/// blocking clauses to the file and repeats until the solver reports UNSAT.
pub fn enumerate_noniso_external<A: ScopeAction>(
    f: &CnfFormula,
    scope: &[u32],
    actions: &[A],
    solver_cmd: &str,
    workdir: &Path,
    timeout: Option<Duration>,
) -> Result<EnumerationResult, EnumerateError> {
    check_scope(f, scope)?;
    let mut current = f.clone();
    let cnf = workdir.join("enum.cnf");
    let out = workdir.join("enum.out");
    let mut result = EnumerationResult { all_count: 0, representatives: Vec::new(), orbit_sizes: Vec::new() };
    loop {
        std::fs::write(&cnf, current.to_dimacs())?;
        let o = process::run(solver_cmd, &[("cnf", cnf.display().to_string())], &out, None, timeout)?;
        if o.timed_out() {
            return Err(EnumerateError::External(format!("{} timed out", o.command)));
        }
        let text = std::fs::read_to_string(&out)?;
        let Some(model) = parse_solver_output(&text, current.var_count())? else {
            break;
        };
        let values: Assignment = scope.iter().map(|&v| model[v as usize - 1]).collect();
        let members = orbit_with(actions, &values);
        for m in &members {
            current.add_clause(blocking_clause(scope, m))?;
        }
        result.all_count += members.len();
        result.orbit_sizes.push(members.len());
        result.representatives.push(members.into_iter().next().expect("orbit is nonempty"));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn formula(vars: u32, clauses: &[&[Lit]]) -> CnfFormula {
        let mut f = CnfFormula::new(vars);
        for c in clauses {
            f.add_clause(c.iter().copied()).unwrap();
        }
        f
    }

    #[test]
    fn small_model_sets() {
        let f = formula(2, &[&[1, 2]]);
        let all = enumerate_all(&f, &[1, 2]).unwrap();
        assert_eq!(all.len(), 3);
        let set: BTreeSet<_> = all.into_iter().collect();
        assert!(!set.contains(&vec![false, false]));

        let one_of_three = formula(3, &[&[1, 2, 3], &[-1, -2], &[-1, -3], &[-2, -3]]);
        assert_eq!(enumerate_all(&one_of_three, &[1, 2, 3]).unwrap().len(), 3);

        assert!(matches!(enumerate_all(&f, &[]), Err(EnumerateError::EmptyScope)));
        assert!(matches!(enumerate_all(&f, &[3]), Err(EnumerateError::ScopeVariable(3))));
        assert!(matches!(enumerate_all_limited(&f, &[1, 2], 2), Err(EnumerateError::Limit(2))));
    }

    #[test]
    fn projection_collapses_hidden_variables() {
        // x3 is free: projecting on x1 gives two assignments, not four.
        let f = formula(3, &[&[1, -1]]);
        assert_eq!(enumerate_all(&f, &[1]).unwrap().len(), 2);
    }

    #[test]
    fn discovery_starts_false_first() {
        let f = formula(2, &[&[1, 2]]);
        assert_eq!(enumerate_all(&f, &[1, 2]).unwrap()[0], vec![false, true]);
    }

    #[test]
    fn swap_symmetry_one_representative() {
        let f = formula(2, &[&[1, 2], &[-1, -2]]);
        let actions = vec![Permutation::identity(2), Permutation::swap(2, 0, 1)];
        let r = enumerate_noniso(&f, &[1, 2], &actions).unwrap();
        assert_eq!(r.representatives, vec![vec![false, true]]);
        assert_eq!(r.orbit_sizes, vec![2]);
        assert_eq!(r.all_count, 2);
        assert_eq!(r.to_manifest(&[(0, 0), (0, 1)], 2), "label 1: stabilizer 1 cells 1:1=0,1:2=1\n");
        let g = SymmetryGroup::trivial(1, 3);
        assert!(matches!(
            enumerate_noniso_cells(&f, &[1, 2], &[(0, 0), (0, 1), (0, 2)], &g),
            Err(EnumerateError::ActionDegree { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn trivial_group_matches_enumerate_all() {
        let f = formula(3, &[&[1, 2], &[-2, 3]]);
        let all = enumerate_all(&f, &[1, 2, 3]).unwrap();
        let r = enumerate_noniso(&f, &[1, 2, 3], &[Permutation::identity(3)]).unwrap();
        assert_eq!(r.representatives, all);
        assert!(r.orbit_sizes.iter().all(|&s| s == 1));
    }

    #[test]
    fn solver_output_parsing() {
        let m = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3).unwrap();
        assert_eq!(m, Some(vec![true, false, true]));
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 3).unwrap(), None);
        assert!(parse_solver_output("", 3).is_err());
    }
}
