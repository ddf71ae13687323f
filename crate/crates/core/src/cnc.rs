//! Cube-and-conquer: split a formula into cubes, solve every cube with a
//! DRAT-logging solver, and check the per-cube refutations.
//!
//! All inter-stage state lives in a work directory:
//!
//! ```text
//! <workdir>/cubes.icnf           one `a <lits> 0` line per cube
//! <workdir>/proofs/cube_NNNNN.drat
//! <workdir>/results/cube_NNNNN.txt
//! <workdir>/combined.drat        byte concatenation of the parts
//! <workdir>/tautology.cnf|.drat  negated cubes and their refutation
//! ```

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cnf::{CnfError, CnfFormula, Lit};
use crate::enumerate::parse_solver_output;
use crate::process::{self, ProcessError};
use crate::solver::{SolveResult, Solver, SolverConfig, SolverError};

#[derive(Debug, Error)]
pub enum CncError {
    #[error("bad cutoff {0:?}: expected a count or a fraction in (0, 1]")]
    Cutoff(String),
    #[error("cube file line {line}: {msg}")]
    CubeFile { line: usize, msg: String },
    #[error("cuber failed: {0}")]
    Cuber(String),
    #[error("checker rejected cube {0}")]
    Rejected(usize),
    #[error("missing proof part {0}")]
    MissingPart(PathBuf),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<CncError>,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CncError {
    pub fn in_stage(self, stage: &'static str) -> CncError {
        CncError::Stage { stage, source: Box::new(self) }
    }
}

/// Cubing stops once at most this many variables are free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    Free(usize),
    /// Fraction of the variables free after root propagation.
    Fraction(f64),
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff::Fraction(0.75)
    }
}

impl Cutoff {
    pub fn resolve(self, free: usize) -> usize {
        match self {
            Cutoff::Free(n) => n,
            Cutoff::Fraction(x) => (x * free as f64).ceil() as usize,
        }
    }
}

impl FromStr for Cutoff {
    type Err = CncError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CncError::Cutoff(s.to_string());
        if s.contains('.') {
            let x: f64 = s.parse().map_err(|_| bad())?;
            if x > 0.0 && x <= 1.0 {
                Ok(Cutoff::Fraction(x))
            } else {
                Err(bad())
            }
        } else {
            s.parse().map(Cutoff::Free).map_err(|_| bad())
        }
    }
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Free(n) => write!(f, "{n}"),
            Cutoff::Fraction(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubeSource {
    Internal,
    External(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubePlan {
    pub cubes: Vec<Vec<Lit>>,
    pub cutoff: usize,
    pub source: CubeSource,
}

impl CubePlan {
    pub fn single() -> CubePlan {
        CubePlan { cubes: vec![Vec::new()], cutoff: 0, source: CubeSource::Internal }
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn to_cube_file(&self) -> String {
        let mut s = String::new();
        for cube in &self.cubes {
            s.push('a');
            for l in cube {
                s.push(' ');
                s.push_str(&l.to_string());
            }
            s.push_str(" 0\n");
        }
        s
    }

    /// The negation of every cube. Unsatisfiable exactly when the cubes
    /// cover every assignment. `None` when some cube is empty.
    pub fn tautology_formula(&self, var_count: u32) -> Result<Option<CnfFormula>, CncError> {
        if self.cubes.iter().any(Vec::is_empty) {
            return Ok(None);
        }
        let mut f = CnfFormula::new(var_count);
        for cube in &self.cubes {
            f.add_clause(cube.iter().map(|&l| -l))?;
        }
        Ok(Some(f))
    }
}

/// Parses `a <lits> 0` lines; blank lines and `c` comments are skipped.
pub fn parse_cube_file(text: &str) -> Result<Vec<Vec<Lit>>, CncError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let bad = |msg: &str| CncError::CubeFile { line: i + 1, msg: msg.to_string() };
        let rest = line.strip_prefix('a').ok_or_else(|| bad("expected `a`"))?;
        let lits = rest
            .split_whitespace()
            .map(|t| t.parse::<Lit>().map_err(|_| bad("bad literal")))
            .collect::<Result<Vec<_>, _>>()?;
        match lits.split_last() {
            Some((0, body)) if !body.contains(&0) => out.push(body.to_vec()),
            _ => return Err(bad("cube must end with a single 0")),
        }
    }
    Ok(out)
}

fn unlimited(config: SolverConfig) -> SolverConfig {
    SolverConfig { max_clauses: None, ..config }
}

/// Primary variables left unassigned by root-level propagation.
///
/// Auxiliary variables (at or above [`CnfFormula::aux_var_base`]) are not
/// counted; they follow the primary ones.
pub fn free_variables(f: &CnfFormula) -> Result<usize, CncError> {
    let mut s = Solver::from_formula(f, unlimited(SolverConfig::unbounded()))?;
    Ok(s.free_vars_after(&[]).map_or(0, |free| free.iter().filter(|&&v| v < f.aux_var_base()).count()))
}

/// Splits on the unassigned primary variable with the most occurrences (ties:
/// lowest index), true branch first, until at most `cutoff` primary
/// variables are free.
///
/// Cubes refuted by propagation are kept so the plan stays exhaustive.
/// `max_cubes` stops further splitting once that many leaves exist.
pub fn cube_internal(f: &CnfFormula, cutoff: usize, max_cubes: usize) -> Result<CubePlan, CncError> {
    let mut occ = vec![0usize; f.var_count() as usize + 1];
    for c in f.clauses() {
        for &l in c {
            occ[l.unsigned_abs() as usize] += 1;
        }
    }
    let mut solver = Solver::from_formula(f, unlimited(SolverConfig::unbounded()))?;
    let mut cubes = Vec::new();
    // Depth-first so that the output order is the order of the branches.
    let mut stack: Vec<Vec<Lit>> = vec![Vec::new()];
    while let Some(cube) = stack.pop() {
        let pending = stack.len() + cubes.len() + 1;
        let free: Option<Vec<u32>> =
            solver.free_vars_after(&cube).map(|vars| vars.into_iter().filter(|&v| v < f.aux_var_base()).collect());
        let split_on = match free {
            Some(free) if free.len() > cutoff && pending < max_cubes => {
                free.iter().copied().max_by(|&a, &b| occ[a as usize].cmp(&occ[b as usize]).then(b.cmp(&a)))
            }
            _ => None,
        };
        match split_on {
            Some(v) => {
                let mut pos = cube.clone();
                pos.push(v as Lit);
                let mut neg = cube;
                neg.push(-(v as Lit));
                // True branch first: satisfiable cubes tend to come early.
                stack.push(neg);
                stack.push(pos);
            }
            None => cubes.push(cube),
        }
    }
    Ok(CubePlan { cubes, cutoff, source: CubeSource::Internal })
}

/// Runs an external cuber. Placeholders: `{cnf}`, `{cubes}`, `{cutoff}`.
pub fn cube_external(f: &CnfFormula, cutoff: usize, template: &str, workdir: &Path) -> Result<CubePlan, CncError> {
    fs::create_dir_all(workdir)?;
    let cnf = workdir.join("cube_input.cnf");
    let cubes = workdir.join("cubes.icnf");
    let log = workdir.join("cuber.log");
    fs::write(&cnf, f.to_dimacs())?;
    let _ = fs::remove_file(&cubes);
    let outcome = process::run(
        template,
        &[("cnf", cnf.display().to_string()), ("cubes", cubes.display().to_string()), ("cutoff", cutoff.to_string())],
        &log,
        None,
        None,
    )?;
    let text =
        fs::read_to_string(&cubes).map_err(|e| CncError::Cuber(format!("{}: no cube file ({e})", outcome.command)))?;
    let parsed = parse_cube_file(&text)?;
    if parsed.is_empty() {
        return Err(CncError::Cuber(format!("{}: cube file is empty", outcome.command)));
    }
    Ok(CubePlan { cubes: parsed, cutoff, source: CubeSource::External(template.to_string()) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Unsat,
    Sat,
    Timeout,
    Error,
    /// Not solved because an earlier cube was satisfiable.
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Unsat => "UNSAT",
            Verdict::Sat => "SAT",
            Verdict::Timeout => "TIMEOUT",
            Verdict::Error => "ERROR",
            Verdict::Skipped => "SKIPPED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "UNSAT" => Ok(Verdict::Unsat),
            "SAT" => Ok(Verdict::Sat),
            "TIMEOUT" => Ok(Verdict::Timeout),
            "ERROR" => Ok(Verdict::Error),
            "SKIPPED" => Ok(Verdict::Skipped),
            _ => Err(format!("unknown verdict {s:?}")),
        }
    }
}

/// Combined verdict of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Unsat,
    Sat,
    Inconclusive,
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregate::Unsat => "UNSAT",
            Aggregate::Sat => "SAT",
            Aggregate::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeOutcome {
    pub id: usize,
    pub verdict: Verdict,
    pub seconds: f64,
    pub proof: PathBuf,
    pub proof_bytes: u64,
    pub model: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub per_cube: Vec<CubeOutcome>,
}

impl SolveOutcome {
    pub fn aggregate(&self) -> Aggregate {
        if self.per_cube.iter().any(|c| c.verdict == Verdict::Sat) {
            Aggregate::Sat
        } else if self.per_cube.iter().all(|c| c.verdict == Verdict::Unsat) {
            Aggregate::Unsat
        } else {
            Aggregate::Inconclusive
        }
    }

    pub fn model(&self) -> Option<&[bool]> {
        self.per_cube.iter().find_map(|c| c.model.as_deref())
    }

    pub fn solve_seconds(&self) -> f64 {
        self.per_cube.iter().map(|c| c.seconds).sum()
    }

    pub fn proof_bytes(&self) -> u64 {
        self.per_cube.iter().map(|c| c.proof_bytes).sum()
    }
}

#[derive(Debug, Clone)]
pub enum ConquerSolver {
    Internal(SolverConfig),
    /// Template with `{cnf}` and `{proof}`; stdout must carry an `s` line and
    /// `v` lines for satisfiable cubes (exit codes 10/20 are also accepted).
    External(String),
}

#[derive(Debug, Clone)]
pub struct ConquerOptions {
    pub jobs: usize,
    pub solver: ConquerSolver,
    pub timeout: Option<Duration>,
    pub resume: bool,
    /// Once cube `s` is satisfiable, report every cube after `s` as skipped.
    pub stop_on_sat: bool,
    pub workdir: PathBuf,
}

impl ConquerOptions {
    pub fn new(workdir: impl Into<PathBuf>) -> ConquerOptions {
        ConquerOptions {
            jobs: default_jobs(),
            solver: ConquerSolver::Internal(unlimited(SolverConfig::unbounded())),
            timeout: None,
            resume: false,
            stop_on_sat: true,
            workdir: workdir.into(),
        }
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn proof_path(workdir: &Path, id: usize) -> PathBuf {
    workdir.join("proofs").join(format!("cube_{id:05}.drat"))
}

fn result_path(workdir: &Path, id: usize) -> PathBuf {
    workdir.join("results").join(format!("cube_{id:05}.txt"))
}

/// Writes `contents` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(tmp, path)
}

fn store_result(workdir: &Path, o: &CubeOutcome) -> io::Result<()> {
    let mut text = format!("{} {} {}\n", o.verdict, o.seconds, o.proof_bytes);
    if let Some(m) = &o.model {
        text.push('v');
        for (i, &b) in m.iter().enumerate() {
            let v = i as i64 + 1;
            text.push_str(&format!(" {}", if b { v } else { -v }));
        }
        text.push_str(" 0\n");
    }
    write_atomic(&result_path(workdir, o.id), text.as_bytes())
}

fn load_result(workdir: &Path, id: usize) -> Option<CubeOutcome> {
    let text = fs::read_to_string(result_path(workdir, id)).ok()?;
    let mut lines = text.lines();
    let mut head = lines.next()?.split_whitespace();
    let verdict: Verdict = head.next()?.parse().ok()?;
    let seconds: f64 = head.next()?.parse().ok()?;
    let proof_bytes: u64 = head.next()?.parse().ok()?;
    let proof = proof_path(workdir, id);
    if verdict == Verdict::Unsat && fs::metadata(&proof).map(|m| m.len()).ok()? != proof_bytes {
        return None;
    }
    let model = lines.next().and_then(|l| l.strip_prefix("v ")).map(|l| {
        l.split_whitespace().filter_map(|t| t.parse::<i64>().ok()).filter(|&v| v != 0).map(|v| v > 0).collect()
    });
    Some(CubeOutcome { id, verdict, seconds, proof, proof_bytes, model })
}

/// Stored results of a finished [`conquer`] run in `workdir`.
pub fn load_outcome(workdir: &Path, cubes: usize) -> Result<SolveOutcome, CncError> {
    let per_cube = (0..cubes)
        .map(|id| load_result(workdir, id).ok_or_else(|| CncError::MissingPart(result_path(workdir, id))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolveOutcome { per_cube })
}

fn solve_cube(f: &CnfFormula, cube: &[Lit], id: usize, opts: &ConquerOptions) -> Result<CubeOutcome, CncError> {
    let proof = proof_path(&opts.workdir, id);
    let start = Instant::now();
    let augmented = f.with_units(cube)?;
    let (verdict, model) = match &opts.solver {
        ConquerSolver::Internal(config) => {
            let mut config = config.clone();
            if let Some(t) = opts.timeout {
                config.deadline = Some(start + t);
            }
            let writer = BufWriter::new(fs::File::create(&proof)?);
            let mut solver = Solver::from_formula(&augmented, config)?;
            solver.set_proof_output(Box::new(writer));
            let result = solver.solve();
            solver.flush_proof()?;
            match result {
                Ok(SolveResult::Unsat) => (Verdict::Unsat, None),
                Ok(SolveResult::Sat(mut m)) => {
                    m.resize(f.var_count() as usize, false);
                    (Verdict::Sat, Some(m))
                }
                Err(SolverError::Interrupted { .. }) => (Verdict::Timeout, None),
                Err(e) => return Err(e.into()),
            }
        }
        ConquerSolver::External(template) => {
            let cnf = opts.workdir.join("proofs").join(format!("cube_{id:05}.cnf"));
            let out = opts.workdir.join("proofs").join(format!("cube_{id:05}.out"));
            fs::write(&cnf, augmented.to_dimacs())?;
            let o = process::run(
                template,
                &[("cnf", cnf.display().to_string()), ("proof", proof.display().to_string())],
                &out,
                None,
                opts.timeout,
            )?;
            let _ = fs::remove_file(&cnf);
            if o.timed_out() {
                (Verdict::Timeout, None)
            } else {
                let text = fs::read_to_string(&out)?;
                match (parse_solver_output(&text, f.var_count()), o.code()) {
                    (Ok(Some(m)), _) => (Verdict::Sat, Some(m)),
                    (Ok(None), _) | (Err(_), Some(20)) => (Verdict::Unsat, None),
                    _ => (Verdict::Error, None),
                }
            }
        }
    };
    let proof_bytes = fs::metadata(&proof).map(|m| m.len()).unwrap_or(0);
    Ok(CubeOutcome { id, verdict, seconds: start.elapsed().as_secs_f64(), proof, proof_bytes, model })
}

/// Solves every cube with a pool of `opts.jobs` threads.
///
/// Each cube's result is stored under `results/` as soon as it is known, so
/// a run with `resume` set skips cubes that already have a stored result.
///
/// With `stop_on_sat`, cubes after the first satisfiable one are reported as
/// skipped whether or not a worker had already started them, so per-cube
/// verdicts do not depend on `jobs`.
pub fn conquer(f: &CnfFormula, plan: &CubePlan, opts: &ConquerOptions) -> Result<SolveOutcome, CncError> {
    fs::create_dir_all(opts.workdir.join("proofs"))?;
    fs::create_dir_all(opts.workdir.join("results"))?;
    let slots: Mutex<Vec<Option<CubeOutcome>>> = Mutex::new(vec![None; plan.len()]);
    let errors: Mutex<Vec<CncError>> = Mutex::new(Vec::new());
    let next = AtomicUsize::new(0);
    let first_sat = AtomicUsize::new(usize::MAX);
    let jobs = opts.jobs.clamp(1, plan.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let id = next.fetch_add(1, Ordering::SeqCst);
                if id >= plan.len() || !errors.lock().unwrap().is_empty() {
                    break;
                }
                if opts.stop_on_sat && id > first_sat.load(Ordering::SeqCst) {
                    continue;
                }
                let stored = if opts.resume { load_result(&opts.workdir, id) } else { None };
                let outcome = match stored {
                    Some(o) => Ok(o),
                    None => solve_cube(f, &plan.cubes[id], id, opts)
                        .and_then(|o| store_result(&opts.workdir, &o).map(|_| o).map_err(CncError::from)),
                };
                match outcome {
                    Ok(o) => {
                        if o.verdict == Verdict::Sat {
                            first_sat.fetch_min(id, Ordering::SeqCst);
                        }
                        slots.lock().unwrap()[id] = Some(o)
                    }
                    Err(e) => errors.lock().unwrap().push(e),
                }
            });
        }
    });
    if let Some(e) = errors.into_inner().unwrap().into_iter().next() {
        return Err(e);
    }
    let cut = if opts.stop_on_sat { first_sat.into_inner() } else { usize::MAX };
    let mut per_cube = Vec::with_capacity(plan.len());
    for (id, slot) in slots.into_inner().unwrap().into_iter().enumerate() {
        if id > cut {
            // Started before the satisfiable cube was known.
            let proof = proof_path(&opts.workdir, id);
            let _ = fs::remove_file(&proof);
            let _ = fs::remove_file(result_path(&opts.workdir, id));
            per_cube.push(CubeOutcome {
                id,
                verdict: Verdict::Skipped,
                seconds: 0.0,
                proof,
                proof_bytes: 0,
                model: None,
            });
        } else {
            per_cube.push(slot.expect("every cube up to the first satisfiable one is solved"));
        }
    }
    Ok(SolveOutcome { per_cube })
}

#[derive(Debug, Clone)]
pub enum Checker {
    /// Forward RUP check with the internal propagation engine. Deletions are
    /// ignored and RAT lemmas are rejected.
    Internal,
    /// Template with `{cnf}` and `{proof}`; accepted when stdout has a line `s VERIFIED`.
    External(String),
}

/// Forward RUP check of a DRAT proof.
pub fn check_rup(f: &CnfFormula, proof: &str) -> Result<bool, CncError> {
    let mut solver = Solver::from_formula(f, unlimited(SolverConfig::unbounded()))?;
    if solver.refutes(&[]) {
        return Ok(true);
    }
    for line in proof.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('d') {
            continue;
        }
        let lits = line
            .split_whitespace()
            .map(|t| t.parse::<Lit>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CncError::CubeFile { line: 0, msg: format!("bad proof line {line:?}") })?;
        let lemma: Vec<Lit> = lits.into_iter().take_while(|&l| l != 0).collect();
        let negated: Vec<Lit> = lemma.iter().map(|&l| -l).collect();
        if !solver.refutes(&negated) {
            return Ok(false);
        }
        if lemma.is_empty() || !solver.add_clause(&lemma)? {
            return Ok(true);
        }
    }
    Ok(solver.refutes(&[]))
}

fn run_checker(checker: &Checker, cnf: &CnfFormula, proof: &Path, scratch: &Path) -> Result<bool, CncError> {
    match checker {
        Checker::Internal => {
            let text = fs::read_to_string(proof).map_err(|_| CncError::MissingPart(proof.to_path_buf()))?;
            check_rup(cnf, &text)
        }
        Checker::External(template) => {
            if !proof.exists() {
                return Err(CncError::MissingPart(proof.to_path_buf()));
            }
            let cnf_path = scratch.with_extension("cnf");
            let out = scratch.with_extension("log");
            fs::write(&cnf_path, cnf.to_dimacs())?;
            process::run(
                template,
                &[("cnf", cnf_path.display().to_string()), ("proof", proof.display().to_string())],
                &out,
                None,
                None,
            )?;
            let _ = fs::remove_file(&cnf_path);
            let text = fs::read_to_string(&out)?;
            Ok(text.lines().any(|l| l.trim() == "s VERIFIED"))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofArtifact {
    pub parts: Vec<PathBuf>,
    pub combined: PathBuf,
    pub combined_bytes: u64,
    /// Checker verdict per part, in cube order.
    pub part_verified: Vec<bool>,
    /// Refutation of the negated cubes; `None` when the plan has an empty cube.
    pub tautology_verified: Option<bool>,
}

impl ProofArtifact {
    pub fn verified(&self) -> bool {
        self.part_verified.iter().all(|&v| v) && self.tautology_verified != Some(false)
    }
}

/// Concatenates the per-cube proofs, checks each against its cube-augmented
/// formula, and refutes the negated cubes to certify that the split is exhaustive.
pub fn combine_and_check(
    f: &CnfFormula,
    plan: &CubePlan,
    outcome: &SolveOutcome,
    checker: &Checker,
    workdir: &Path,
) -> Result<ProofArtifact, CncError> {
    let parts: Vec<PathBuf> = outcome.per_cube.iter().map(|c| c.proof.clone()).collect();
    let combined = workdir.join("combined.drat");
    {
        let mut w = BufWriter::new(fs::File::create(&combined)?);
        for p in &parts {
            let mut r = fs::File::open(p).map_err(|_| CncError::MissingPart(p.clone()))?;
            io::copy(&mut r, &mut w)?;
        }
        w.flush()?;
    }
    let mut part_verified = Vec::with_capacity(parts.len());
    for (id, (cube, part)) in plan.cubes.iter().zip(&parts).enumerate() {
        let augmented = f.with_units(cube)?;
        let scratch = workdir.join("proofs").join(format!("check_{id:05}"));
        part_verified.push(run_checker(checker, &augmented, part, &scratch)?);
    }
    let tautology_verified = match plan.tautology_formula(f.var_count())? {
        None => None,
        Some(t) => {
            let cnf = workdir.join("tautology.cnf");
            let proof = workdir.join("tautology.drat");
            fs::write(&cnf, t.to_dimacs())?;
            let writer = BufWriter::new(fs::File::create(&proof)?);
            let result = crate::solver::solve_with_proof(&t, unlimited(SolverConfig::unbounded()), writer)?;
            if result.is_sat() {
                Some(false)
            } else {
                Some(run_checker(checker, &t, &proof, &workdir.join("tautology_check"))?)
            }
        }
    };
    Ok(ProofArtifact {
        combined_bytes: fs::metadata(&combined)?.len(),
        combined,
        parts,
        part_verified,
        tautology_verified,
    })
}

/// Whether wall-clock columns are written to the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Timings {
    #[default]
    Record,
    /// Leave `cubing_frac` and `solve_seconds` empty for reproducible files.
    Omit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub instance: String,
    pub cubes: usize,
    pub cubing_frac: f64,
    pub solve_seconds: f64,
    pub proof_bytes: u64,
    pub verdict: String,
}

pub const REPORT_HEADER: [&str; 6] = ["instance", "cubes", "cubing_frac", "solve_seconds", "proof_bytes", "verdict"];

pub fn write_report<W: Write>(w: W, rows: &[ReportRow], timings: Timings) -> Result<(), CncError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(REPORT_HEADER)?;
    for r in rows {
        let (frac, secs) = match timings {
            Timings::Record => (format!("{:.4}", r.cubing_frac), format!("{:.3}", r.solve_seconds)),
            Timings::Omit => (String::new(), String::new()),
        };
        out.write_record([
            r.instance.clone(),
            r.cubes.to_string(),
            frac,
            secs,
            r.proof_bytes.to_string(),
            r.verdict.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_report<R: io::Read>(r: R) -> Result<Vec<ReportRow>, CncError> {
    let mut rd = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("").to_string();
        rows.push(ReportRow {
            instance: field(0),
            cubes: field(1).parse().unwrap_or(0),
            cubing_frac: field(2).parse().unwrap_or(0.0),
            solve_seconds: field(3).parse().unwrap_or(0.0),
            proof_bytes: field(4).parse().unwrap_or(0),
            verdict: field(5),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_internal;

    fn formula(vars: u32, clauses: &[&[Lit]]) -> CnfFormula {
        let mut f = CnfFormula::new(vars);
        for c in clauses {
            f.add_clause(c.iter().copied()).unwrap();
        }
        f
    }

    #[test]
    fn cutoff_parsing() {
        assert_eq!("12".parse::<Cutoff>().unwrap(), Cutoff::Free(12));
        assert_eq!("0.75".parse::<Cutoff>().unwrap(), Cutoff::Fraction(0.75));
        assert!("1.5".parse::<Cutoff>().is_err());
        assert!("x".parse::<Cutoff>().is_err());
        assert_eq!(Cutoff::default().resolve(10), 8);
    }

    #[test]
    fn cube_file_round_trip() {
        let plan = CubePlan { cubes: vec![vec![1, -2], vec![-1], vec![]], cutoff: 3, source: CubeSource::Internal };
        let text = plan.to_cube_file();
        assert_eq!(text, "a 1 -2 0\na -1 0\na 0\n");
        assert_eq!(parse_cube_file(&text).unwrap(), plan.cubes);
        assert!(parse_cube_file("a 1 2\n").is_err());
        assert!(parse_cube_file("b 1 0\n").is_err());
    }

    #[test]
    fn internal_split_is_exhaustive() {
        let f = formula(3, &[&[1, 2, 3]]);
        let whole = cube_internal(&f, 3, 1000).unwrap();
        assert_eq!(whole.cubes, vec![Vec::<Lit>::new()]);
        let plan = cube_internal(&f, 1, 1000).unwrap();
        assert_eq!(plan.len(), 4);
        let vars: std::collections::BTreeSet<Lit> = plan.cubes.iter().flatten().map(|l| l.abs()).collect();
        assert_eq!(vars.len(), 2);
        let t = plan.tautology_formula(3).unwrap().unwrap();
        assert!(!solve_internal(&t, &[], SolverConfig::unbounded()).unwrap().is_sat());
    }

    #[test]
    fn conquer_and_check_contradiction() {
        let dir = tempfile::tempdir().unwrap();
        let f = formula(1, &[&[1], &[-1]]);
        let plan = CubePlan::single();
        let opts = ConquerOptions::new(dir.path());
        let out = conquer(&f, &plan, &opts).unwrap();
        assert_eq!(out.aggregate(), Aggregate::Unsat);
        let art = combine_and_check(&f, &plan, &out, &Checker::Internal, dir.path()).unwrap();
        assert!(art.verified());
        assert_eq!(art.tautology_verified, None);

        let split = CubePlan { cubes: vec![vec![1], vec![-1]], cutoff: 0, source: CubeSource::Internal };
        let out = conquer(&f, &split, &opts).unwrap();
        let art = combine_and_check(&f, &split, &out, &Checker::Internal, dir.path()).unwrap();
        assert_eq!(art.part_verified, vec![true, true]);
        assert_eq!(art.tautology_verified, Some(true));
        let parts: u64 = art.parts.iter().map(|p| fs::metadata(p).unwrap().len()).sum();
        assert_eq!(art.combined_bytes, parts);
    }

    #[test]
    fn satisfiable_cube_reports_model() {
        let dir = tempfile::tempdir().unwrap();
        let f = formula(2, &[&[1, 2]]);
        let plan = CubePlan { cubes: vec![vec![-1, -2], vec![1]], cutoff: 0, source: CubeSource::Internal };
        let mut opts = ConquerOptions::new(dir.path());
        opts.jobs = 2;
        let out = conquer(&f, &plan, &opts).unwrap();
        assert_eq!(out.aggregate(), Aggregate::Sat);
        assert_eq!(out.per_cube[0].verdict, Verdict::Unsat);
        assert!(f.is_satisfied_by(out.model().unwrap()));
        // Resume reads the stored results back unchanged.
        opts.resume = true;
        let again = conquer(&f, &plan, &opts).unwrap();
        assert_eq!(again, out);
    }

    #[test]
    fn cubes_after_first_sat_are_skipped() {
        let f = formula(3, &[&[1, 2, 3], &[-2, -3]]);
        let plan = CubePlan {
            cubes: vec![vec![-1, -2, -3], vec![-1, 2], vec![1], vec![-1, -2, 3]],
            cutoff: 0,
            source: CubeSource::Internal,
        };
        let verdicts = |jobs: usize, stop: bool| {
            let dir = tempfile::tempdir().unwrap();
            let mut opts = ConquerOptions::new(dir.path());
            opts.jobs = jobs;
            opts.stop_on_sat = stop;
            let out = conquer(&f, &plan, &opts).unwrap();
            for c in out.per_cube.iter().filter(|c| c.verdict == Verdict::Skipped) {
                assert!(!proof_path(dir.path(), c.id).exists());
                assert!(!result_path(dir.path(), c.id).exists());
            }
            out.per_cube.iter().map(|c| c.verdict).collect::<Vec<_>>()
        };
        use Verdict::*;
        for jobs in [1, 2, 3] {
            assert_eq!(verdicts(jobs, true), vec![Unsat, Sat, Skipped, Skipped]);
            assert_eq!(verdicts(jobs, false), vec![Unsat, Sat, Sat, Sat]);
        }
    }

    #[test]
    fn rup_checker_rejects_bogus_lemma() {
        let f = formula(2, &[&[1, 2]]);
        assert!(!check_rup(&f, "1 0\n").unwrap());
        let g = formula(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert!(check_rup(&g, "1 0\n0\n").unwrap());
        assert!(!check_rup(&g, "").unwrap());
    }

    #[test]
    fn report_round_trip() {
        let rows = vec![ReportRow {
            instance: "order6".into(),
            cubes: 4,
            cubing_frac: 0.25,
            solve_seconds: 1.5,
            proof_bytes: 100,
            verdict: "UNSAT".into(),
        }];
        let mut buf = Vec::new();
        write_report(&mut buf, &rows, Timings::Record).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "instance,cubes,cubing_frac,solve_seconds,proof_bytes,verdict\norder6,4,0.2500,1.500,100,UNSAT\n"
        );
        assert_eq!(read_report(buf.as_slice()).unwrap(), rows);
        let mut buf = Vec::new();
        write_report(&mut buf, &rows, Timings::Omit).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("order6,4,,,100,UNSAT\n"));
    }
}
