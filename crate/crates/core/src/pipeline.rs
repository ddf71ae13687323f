//! End-to-end runs: encode, break symmetries, cube, conquer, check, report.
//!
//! Every instance gets its own directory under the work directory:
//!
//! ```text
//! <workdir>/<instance>/<instance>.cnf    the formula that is conquered
//! <workdir>/<instance>/<instance>.map    variable to cell sidecar
//! <workdir>/<instance>/cubes.icnf
//! <workdir>/<instance>/model.txt         decoded window when satisfiable
//! <workdir>/labels.manifest              block method only
//! <workdir>/results.csv
//! ```

use std::collections::HashMap;
use std::error::Error as StdError;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::case::CaseSpec;
use crate::cnc::{
    self, Aggregate, Checker, ConquerOptions, ConquerSolver, CubePlan, Cutoff, ProofArtifact, ReportRow, Timings,
};
use crate::cnf::{CnfFormula, Lit};
use crate::encoder::{
    case_column_blocks, encode_case, encode_full_plane, CaseEncodeOptions, FullPlaneOptions, PlaneEncoding, VarMap,
};
use crate::enumerate::enumerate_all;
use crate::group::{extend_to_region, matrix_symmetries, MatrixSymmetry, SymmetryGroup, DEFAULT_GROUP_CAP};
use crate::matrix::{Cell, PartialIncidenceMatrix, PlaneParams};
use crate::perm::Permutation;
use crate::symbreak::{
    block_min_clauses, build_labeling, lex_leader_clauses, BlockLabeling, ColumnSorter, LexOrdering, SortedAction,
    TargetBlock,
};

/// A stage failure, with the artifact it was working on.
#[derive(Debug, Error)]
#[error("{stage} ({}): {source}", path.display())]
pub struct PipelineError {
    pub stage: &'static str,
    pub path: PathBuf,
    #[source]
    pub source: Box<dyn StdError + Send + Sync>,
}

fn at<E: Into<Box<dyn StdError + Send + Sync>>>(stage: &'static str, path: &Path) -> impl FnOnce(E) -> PipelineError {
    let path = path.to_path_buf();
    move |e| PipelineError { stage, path, source: e.into() }
}

#[derive(Debug, Clone)]
pub enum Target {
    Plane(PlaneParams),
    Case(CaseSpec),
}

/// How the initial row/column symmetries of a case are broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Lex-leader constraints over the initial columns.
    Lex,
    /// First-block labelling and one instance per label.
    Block,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub workdir: PathBuf,
    pub cutoff: Cutoff,
    pub max_cubes: usize,
    /// External cuber template; the internal splitter is used when `None`.
    pub cuber: Option<String>,
    pub jobs: usize,
    pub solver: ConquerSolver,
    pub timeout: Option<Duration>,
    pub resume: bool,
    /// See [`ConquerOptions::stop_on_sat`].
    pub stop_on_sat: bool,
    /// `None` leaves refutations unchecked.
    pub checker: Option<Checker>,
    pub timings: Timings,
    pub plane: FullPlaneOptions,
    /// Defaults to [`CaseEncodeOptions::for_case`].
    pub case: Option<CaseEncodeOptions>,
    /// Defaults to the block method for cases 1a–c.
    pub method: Option<Method>,
    /// Whether symmetry-breaking clauses take part in cubing. Defaults to
    /// false for cases 1a and 1c, true otherwise.
    pub symmetry_in_cubing: Option<bool>,
    /// Block method: solve only the first this many labels.
    pub max_instances: Option<usize>,
    /// Block method: highest block index in the minimum-label condition.
    pub range_max: Option<usize>,
}

impl PipelineConfig {
    pub fn new(workdir: impl Into<PathBuf>) -> PipelineConfig {
        PipelineConfig {
            workdir: workdir.into(),
            cutoff: Cutoff::default(),
            max_cubes: 4096,
            cuber: None,
            jobs: cnc::default_jobs(),
            solver: ConquerOptions::new("").solver,
            timeout: None,
            resume: false,
            stop_on_sat: true,
            checker: Some(Checker::Internal),
            timings: Timings::Record,
            plane: FullPlaneOptions::default(),
            case: None,
            method: None,
            symmetry_in_cubing: None,
            max_instances: None,
            range_max: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceVerdict {
    Sat,
    Unsat,
    /// Refuted, but no checker was configured.
    UnsatUnchecked,
    /// Refuted, but the checker did not accept every part.
    UnsatRejected,
    Inconclusive,
}

impl InstanceVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceVerdict::Sat => "SAT",
            InstanceVerdict::Unsat => "UNSAT",
            InstanceVerdict::UnsatUnchecked => "UNSAT-UNCHECKED",
            InstanceVerdict::UnsatRejected => "UNSAT-REJECTED",
            InstanceVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct InstanceReport {
    pub name: String,
    pub dir: PathBuf,
    pub cnf: PathBuf,
    pub verdict: InstanceVerdict,
    pub cubes: usize,
    pub cubing_seconds: f64,
    pub solve_seconds: f64,
    pub proof_bytes: u64,
    /// Decoded window of a satisfying assignment.
    pub model: Option<PartialIncidenceMatrix>,
    pub artifact: Option<ProofArtifact>,
}

impl InstanceReport {
    pub fn row(&self) -> ReportRow {
        let total = self.cubing_seconds + self.solve_seconds;
        ReportRow {
            instance: self.name.clone(),
            cubes: self.cubes,
            cubing_frac: if total > 0.0 { self.cubing_seconds / total } else { 0.0 },
            solve_seconds: self.solve_seconds,
            proof_bytes: self.proof_bytes,
            verdict: self.verdict.as_str().to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub instances: Vec<InstanceReport>,
    pub csv: PathBuf,
    /// Block method only.
    pub labeling: Option<BlockLabeling>,
    /// Block method only: number of first-block solutions.
    pub first_block_solutions: Option<usize>,
}

impl PipelineReport {
    pub fn rows(&self) -> Vec<ReportRow> {
        self.instances.iter().map(InstanceReport::row).collect()
    }

    /// SAT if any instance is, UNSAT if all are checked refutations.
    pub fn aggregate(&self) -> InstanceVerdict {
        let v: Vec<InstanceVerdict> = self.instances.iter().map(|i| i.verdict).collect();
        if v.contains(&InstanceVerdict::Sat) {
            InstanceVerdict::Sat
        } else if v.contains(&InstanceVerdict::Inconclusive) {
            InstanceVerdict::Inconclusive
        } else if v.contains(&InstanceVerdict::UnsatRejected) {
            InstanceVerdict::UnsatRejected
        } else if v.contains(&InstanceVerdict::UnsatUnchecked) {
            InstanceVerdict::UnsatUnchecked
        } else {
            InstanceVerdict::Unsat
        }
    }
}

/// Runs every stage for `target` and writes `results.csv`.
pub fn run_pipeline(target: &Target, cfg: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    fs::create_dir_all(&cfg.workdir).map_err(at("setup", &cfg.workdir))?;
    let mut report = match target {
        Target::Plane(params) => {
            let enc = encode_full_plane(*params, cfg.plane).map_err(at("encode", &cfg.workdir))?;
            let name = format!("order{}", params.order());
            let inst = solve_instance(&name, &enc.formula, &enc.formula, &enc.varmap, cfg)?;
            PipelineReport { instances: vec![inst], csv: PathBuf::new(), labeling: None, first_block_solutions: None }
        }
        Target::Case(spec) => {
            let method = cfg.method.unwrap_or(if spec.id.uses_block_method() { Method::Block } else { Method::Lex });
            match method {
                Method::Lex => run_lex_case(spec, cfg)?,
                Method::Block => run_block_case(spec, cfg)?,
            }
        }
    };
    let csv = cfg.workdir.join("results.csv");
    let mut buf = Vec::new();
    cnc::write_report(&mut buf, &report.rows(), cfg.timings).map_err(at("report", &csv))?;
    cnc::write_atomic(&csv, &buf).map_err(at("report", &csv))?;
    report.csv = csv;
    Ok(report)
}

pub fn case_options(spec: &CaseSpec, cfg: &PipelineConfig) -> CaseEncodeOptions {
    cfg.case.clone().unwrap_or_else(|| CaseEncodeOptions::for_case(spec))
}

pub fn symmetry_in_cubing(spec: &CaseSpec, cfg: &PipelineConfig) -> bool {
    use crate::case::CaseId;
    cfg.symmetry_in_cubing.unwrap_or(!matches!(spec.id, CaseId::C1a | CaseId::C1c))
}

/// Known top rows restricted to the initial columns.
pub fn initial_configuration(spec: &CaseSpec) -> PartialIncidenceMatrix {
    let (rows, cols) = (spec.top_rows(), spec.initial_col_count);
    let mut m = PartialIncidenceMatrix::unknown(rows, cols).expect("case has initial columns");
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, spec.known_rows.get(r, c));
        }
    }
    m
}

/// Symmetry group of the initial configuration.
pub fn case_group(spec: &CaseSpec) -> Result<SymmetryGroup, crate::group::GroupError> {
    matrix_symmetries(&initial_configuration(spec), None, DEFAULT_GROUP_CAP)
}

/// The window restricted to its initial columns, which come first.
fn initial_region(spec: &CaseSpec, vm: &VarMap) -> PartialIncidenceMatrix {
    let cols = spec.initial_col_count;
    let w = vm.window();
    let mut m = PartialIncidenceMatrix::unknown(w.rows(), cols).expect("window has initial columns");
    for r in 0..w.rows() {
        for c in 0..cols {
            m.set(r, c, w.get(r, c));
        }
    }
    m
}

/// Extends a symmetry of the initial configuration to all window rows, with
/// the given column permutation of the window.
fn extend(
    g: &MatrixSymmetry,
    region: &PartialIncidenceMatrix,
    col_perm: Permutation,
) -> Result<MatrixSymmetry, crate::group::GroupError> {
    let ext = extend_to_region(g, region)?;
    Ok(MatrixSymmetry::new(ext.row_perm, col_perm))
}

fn pad(p: &Permutation, degree: usize) -> Permutation {
    let mut images: Vec<usize> = (0..p.degree()).map(|i| p.apply(i)).collect();
    images.extend(p.degree()..degree);
    Permutation::from_images(images).expect("padding keeps a bijection")
}

/// Lex-leader constraints over the unknown cells of the window rows times
/// the initial columns, one per nontrivial symmetry.
pub fn lex_clauses(spec: &CaseSpec, enc: &mut PlaneEncoding) -> Result<Vec<Vec<Lit>>, Box<dyn StdError + Send + Sync>> {
    let group = case_group(spec)?;
    let region = initial_region(spec, &enc.varmap);
    let width = enc.varmap.cols();
    let mut syms = Vec::new();
    for g in group.non_identity() {
        syms.push(extend(g, &region, pad(&g.col_perm, width))?);
    }
    let cells: Vec<(usize, usize)> = (0..region.rows()).flat_map(|r| (0..region.cols()).map(move |c| (r, c))).collect();
    let ord = LexOrdering::from_symmetries(&enc.varmap, &cells, &syms)?;
    Ok(lex_leader_clauses(&mut enc.formula, &ord)?)
}

fn run_lex_case(spec: &CaseSpec, cfg: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    let mut enc = encode_case(spec, &case_options(spec, cfg)).map_err(at("encode", &cfg.workdir))?;
    let base = enc.formula.clone();
    let clauses = lex_clauses(spec, &mut enc).map_err(at("symbreak", &cfg.workdir))?;
    enc.formula.extend_clauses(clauses).map_err(at("symbreak", &cfg.workdir))?;
    let cube_on = if symmetry_in_cubing(spec, cfg) { &enc.formula } else { &base };
    let name = format!("case{}", spec.id);
    let inst = solve_instance(&name, cube_on, &enc.formula, &enc.varmap, cfg)?;
    Ok(PipelineReport { instances: vec![inst], csv: PathBuf::new(), labeling: None, first_block_solutions: None })
}

/// Window columns of a block's non-initial columns.
fn block_columns(spec: &CaseSpec, vm: &VarMap, b: usize) -> Vec<usize> {
    let range = &spec.blocks[b];
    (0..vm.cols())
        .filter(|&wc| {
            let pc = vm.col_label(wc);
            range.contains(&pc) && pc >= spec.initial_col_count
        })
        .collect()
}

fn block_cells(vm: &VarMap, cols: &[usize]) -> Vec<(usize, usize)> {
    (0..vm.rows())
        .flat_map(|r| cols.iter().map(move |&c| (r, c)))
        .filter(|&(r, c)| vm.window().get(r, c) == Cell::Unknown)
        .collect()
}

/// The known row meeting every non-initial column of block `b`.
fn block_owner(spec: &CaseSpec, b: usize) -> Option<usize> {
    let cols: Vec<usize> = spec.blocks[b].clone().filter(|&k| k >= spec.initial_col_count).collect();
    (0..spec.top_rows()).find(|&r| !cols.is_empty() && cols.iter().all(|&k| spec.known_rows.get(r, k) == Cell::One))
}

fn column_sorter(spec: &CaseSpec, vm: &VarMap, cols: &[usize], cells: &[(usize, usize)]) -> ColumnSorter {
    let blocks: Vec<_> = case_column_blocks(spec, vm).into_iter().filter(|b| b.cols == cols).collect();
    ColumnSorter::new(cells, &blocks)
}

/// Column permutation of the window exchanging two equally sized column
/// lists position by position.
fn swap_columns(width: usize, a: &[usize], b: &[usize]) -> Permutation {
    let mut images: Vec<usize> = (0..width).collect();
    for (&x, &y) in a.iter().zip(b) {
        images[x] = y;
        images[y] = x;
    }
    Permutation::from_images(images).expect("disjoint column lists")
}

/// The first-block instance: the window with every other block left out and
/// no outside columns.
pub struct FirstBlock {
    pub encoding: PlaneEncoding,
    /// Window columns of block 1.
    pub cols: Vec<usize>,
    /// Unknown block 1 cells, the positions of every assignment.
    pub scope: Vec<(usize, usize)>,
    pub vars: Vec<u32>,
    /// Symmetries fixing the row that owns block 1, followed by column-lex
    /// sorting of the block.
    pub actions: Vec<SortedAction>,
}

pub fn first_block(spec: &CaseSpec, opts: &CaseEncodeOptions) -> Result<FirstBlock, Box<dyn StdError + Send + Sync>> {
    if spec.blocks.is_empty() {
        return Err("case lists no blocks".into());
    }
    let owner1 = block_owner(spec, 0).ok_or("block 1 has no owning row")?;
    let group = case_group(spec)?;
    let first_opts = CaseEncodeOptions {
        include_outside: 0,
        omit_blocks: (2..=spec.blocks.len()).collect(),
        column_lex: true,
        ..opts.clone()
    };
    let encoding = encode_case(spec, &first_opts)?;
    let vm = &encoding.varmap;
    let cols = block_columns(spec, vm, 0);
    let scope = block_cells(vm, &cols);
    if scope.is_empty() {
        return Err("block 1 has no unknown cells".into());
    }
    let pos: HashMap<(usize, usize), usize> = scope.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let region = initial_region(spec, vm);
    let sorter = Arc::new(column_sorter(spec, vm, &cols, &scope));
    let mut actions = Vec::new();
    for g in group.elements().iter().filter(|g| g.row_perm.apply(owner1) == owner1) {
        let ext = extend_to_region(g, &region)?;
        let images = scope
            .iter()
            .map(|&(r, c)| pos.get(&(ext.row_perm.apply(r), c)).copied())
            .collect::<Option<Vec<usize>>>()
            .ok_or("a symmetry moves block 1 cells onto known cells")?;
        actions.push(SortedAction { perm: Permutation::from_images(images)?, sorter: Arc::clone(&sorter) });
    }
    let vars = scope.iter().map(|&(r, c)| vm.var(r, c).expect("unknown cell")).collect();
    Ok(FirstBlock { cols, scope, vars, actions, encoding })
}

/// Everything the block method derives before the per-label instances.
pub struct BlockSetup {
    pub labeling: BlockLabeling,
    pub actions: Vec<SortedAction>,
    pub first_block_solutions: usize,
    /// First-block variables of the main encoding, in scope order.
    pub scope_vars: Vec<u32>,
    pub targets: Vec<TargetBlock>,
}

/// Enumerates the first block, labels its orbits under the symmetries fixing
/// the first block's row, and finds a symmetry sending each other block onto
/// the first one.
pub fn block_setup(
    spec: &CaseSpec,
    opts: &CaseEncodeOptions,
    enc: &PlaneEncoding,
) -> Result<BlockSetup, Box<dyn StdError + Send + Sync>> {
    let fb = first_block(spec, opts)?;
    if fb.cols != block_columns(spec, &enc.varmap, 0) {
        return Err("block 1 columns must precede every omitted column".into());
    }
    let solutions = enumerate_all(&fb.encoding.formula, &fb.vars)?;
    let labeling = build_labeling(&fb.scope, &solutions, &fb.actions)?;
    let scope_vars = fb
        .scope
        .iter()
        .map(|&(r, c)| enc.varmap.var(r, c))
        .collect::<Option<Vec<u32>>>()
        .ok_or("block 1 cells differ between the encodings")?;

    let owner1 = block_owner(spec, 0).ok_or("block 1 has no owning row")?;
    let group = case_group(spec)?;
    let region = initial_region(spec, &enc.varmap);
    let mut targets = Vec::new();
    for b in 1..spec.blocks.len() {
        let cols = block_columns(spec, &enc.varmap, b);
        let Some(owner) = block_owner(spec, b) else { continue };
        if cols.is_empty() || cols.len() != fb.cols.len() {
            continue;
        }
        let Some(g) = group.elements().iter().find(|g| g.row_perm.apply(owner) == owner1) else {
            continue;
        };
        let psi = extend(g, &region, swap_columns(enc.varmap.cols(), &cols, &fb.cols))?;
        let cells = block_cells(&enc.varmap, &cols);
        let sorter = column_sorter(spec, &enc.varmap, &cols, &cells);
        targets.push(TargetBlock { cells, psi, sorter });
    }
    Ok(BlockSetup { labeling, actions: fb.actions, first_block_solutions: solutions.len(), scope_vars, targets })
}

/// Instance `k` of the block method: the base formula with block 1 fixed to
/// representative `k`, and that formula plus the minimum-label clauses.
pub fn block_instance(
    setup: &BlockSetup,
    enc: &PlaneEncoding,
    k: usize,
    range_max: usize,
) -> Result<(CnfFormula, CnfFormula), Box<dyn StdError + Send + Sync>> {
    let rep = setup.labeling.representatives.get(k.wrapping_sub(1)).ok_or_else(|| format!("no label {k}"))?;
    let mut base = enc.formula.clone();
    for (&v, &b) in setup.scope_vars.iter().zip(rep) {
        let l = v as Lit;
        base.add_clause([if b { l } else { -l }])?;
    }
    let clauses = block_min_clauses(&setup.labeling, &setup.actions, k, &setup.targets, range_max, &enc.varmap)?;
    let mut full = base.clone();
    full.extend_clauses(clauses)?;
    Ok((base, full))
}

/// Range bound for the minimum-label condition, capped by the blocks present.
pub fn effective_range_max(spec: &CaseSpec, setup: &BlockSetup, requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| spec.id.block_range_max()).min(setup.targets.len() + 1)
}

fn run_block_case(spec: &CaseSpec, cfg: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    let opts = case_options(spec, cfg);
    let enc = encode_case(spec, &opts).map_err(at("encode", &cfg.workdir))?;
    let manifest = cfg.workdir.join("labels.manifest");
    let setup = block_setup(spec, &opts, &enc).map_err(at("label", &manifest))?;
    fs::write(&manifest, setup.labeling.to_manifest()).map_err(at("label", &manifest))?;
    let range_max = effective_range_max(spec, &setup, cfg.range_max);
    let count = cfg.max_instances.map_or(setup.labeling.len(), |m| m.min(setup.labeling.len()));
    let with_symmetry = symmetry_in_cubing(spec, cfg);
    let mut instances = Vec::new();
    for k in 1..=count {
        let name = format!("case{}_label{k:04}", spec.id);
        let dir = cfg.workdir.join(&name);
        let (base, full) = block_instance(&setup, &enc, k, range_max).map_err(at("symbreak", &dir))?;
        let cube_on = if with_symmetry { &full } else { &base };
        instances.push(solve_instance(&name, cube_on, &full, &enc.varmap, cfg)?);
    }
    Ok(PipelineReport {
        instances,
        csv: PathBuf::new(),
        first_block_solutions: Some(setup.first_block_solutions),
        labeling: Some(setup.labeling),
    })
}

fn cube(f: &CnfFormula, cfg: &PipelineConfig, dir: &Path) -> Result<CubePlan, cnc::CncError> {
    let cutoff = cfg.cutoff.resolve(cnc::free_variables(f)?);
    match &cfg.cuber {
        Some(template) => cnc::cube_external(f, cutoff, template, dir),
        None => cnc::cube_internal(f, cutoff, cfg.max_cubes),
    }
}

/// Cubes `cube_on`, conquers `full` and checks the refutation.
///
/// Both formulas share their primary variables, so cubes of one apply to the other.
pub fn solve_instance(
    name: &str,
    cube_on: &CnfFormula,
    full: &CnfFormula,
    vm: &VarMap,
    cfg: &PipelineConfig,
) -> Result<InstanceReport, PipelineError> {
    let dir = cfg.workdir.join(name);
    fs::create_dir_all(&dir).map_err(at("setup", &dir))?;
    let cnf = dir.join(format!("{name}.cnf"));
    fs::write(&cnf, full.to_dimacs()).map_err(at("encode", &cnf))?;
    let map = dir.join(format!("{name}.map"));
    fs::write(&map, vm.to_map_text(full)).map_err(at("encode", &map))?;

    let cubes_path = dir.join("cubes.icnf");
    let start = Instant::now();
    let plan = cube(cube_on, cfg, &dir).map_err(at("cube", &cubes_path))?;
    let cubing_seconds = start.elapsed().as_secs_f64();
    fs::write(&cubes_path, plan.to_cube_file()).map_err(at("cube", &cubes_path))?;

    let opts = ConquerOptions {
        jobs: cfg.jobs,
        solver: cfg.solver.clone(),
        timeout: cfg.timeout,
        resume: cfg.resume,
        stop_on_sat: cfg.stop_on_sat,
        workdir: dir.clone(),
    };
    let outcome = cnc::conquer(full, &plan, &opts).map_err(at("conquer", &dir))?;
    let mut report = InstanceReport {
        name: name.to_string(),
        dir: dir.clone(),
        cnf,
        verdict: InstanceVerdict::Inconclusive,
        cubes: plan.len(),
        cubing_seconds,
        solve_seconds: outcome.solve_seconds(),
        proof_bytes: outcome.proof_bytes(),
        model: None,
        artifact: None,
    };
    match outcome.aggregate() {
        Aggregate::Sat => {
            let model = outcome.model().expect("a satisfiable cube has a model");
            let grid = vm.decode(model);
            let path = dir.join("model.txt");
            fs::write(&path, grid.to_grid_string()).map_err(at("decode", &path))?;
            report.model = Some(grid);
            report.verdict = InstanceVerdict::Sat;
        }
        Aggregate::Unsat => match &cfg.checker {
            None => report.verdict = InstanceVerdict::UnsatUnchecked,
            Some(checker) => {
                let art = cnc::combine_and_check(full, &plan, &outcome, checker, &dir).map_err(at("check", &dir))?;
                report.verdict = if art.verified() { InstanceVerdict::Unsat } else { InstanceVerdict::UnsatRejected };
                report.artifact = Some(art);
            }
        },
        Aggregate::Inconclusive => {}
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dir: &Path) -> PipelineConfig {
        PipelineConfig { jobs: 1, ..PipelineConfig::new(dir) }
    }

    #[test]
    fn order_two_is_sat_with_model() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_pipeline(&Target::Plane(PlaneParams::new(2)), &config(dir.path())).unwrap();
        assert_eq!(r.aggregate(), InstanceVerdict::Sat);
        let m = r.instances[0].model.as_ref().unwrap();
        assert!(m.validate_partial().is_empty());
        assert!(dir.path().join("order2/model.txt").exists());
        let rows = cnc::read_report(fs::File::open(&r.csv).unwrap()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].verdict, "SAT");
    }

    #[test]
    fn unsat_instance_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        let mut f = CnfFormula::new(2);
        for c in [[1, 2], [1, -2], [-1, 2], [-1, -2]] {
            f.add_clause(c).unwrap();
        }
        let vm = VarMap::new(PartialIncidenceMatrix::unknown(1, 2).unwrap());
        let cfg = PipelineConfig { cutoff: Cutoff::Free(1), ..config(dir.path()) };
        let r = solve_instance("tiny", &f, &f, &vm, &cfg).unwrap();
        assert_eq!(r.verdict, InstanceVerdict::Unsat);
        assert_eq!(r.cubes, 2);
        let art = r.artifact.unwrap();
        assert_eq!(art.part_verified, vec![true, true]);
        assert_eq!(art.tautology_verified, Some(true));
        let on_disk: u64 = art.parts.iter().map(|p| fs::metadata(p).unwrap().len()).sum();
        assert_eq!(on_disk, r.proof_bytes);
        let unchecked = solve_instance("tiny2", &f, &f, &vm, &PipelineConfig { checker: None, ..cfg }).unwrap();
        assert_eq!(unchecked.verdict, InstanceVerdict::UnsatUnchecked);
    }

    #[test]
    fn pad_extends_with_fixed_points() {
        let p = Permutation::parse_cycles(3, "(1,2)").unwrap();
        let q = pad(&p, 5);
        assert_eq!((q.apply(0), q.apply(1), q.apply(4)), (1, 0, 4));
    }
}
