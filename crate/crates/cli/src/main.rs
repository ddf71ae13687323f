use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use planesat::case::CaseSpec;
use planesat::cnc::{self, Checker, ConquerOptions, ConquerSolver, CubePlan, CubeSource, Cutoff, Timings};
use planesat::cnf::CnfFormula;
use planesat::encoder::{
    encode_case, encode_full_plane, Canonical, CaseEncodeOptions, FullPlaneOptions, PlaneEncoding,
};
use planesat::enumerate::{enumerate_all, enumerate_noniso, enumerate_noniso_external};
use planesat::matrix::PlaneParams;
use planesat::pipeline::{self, Method, PipelineConfig, Target};

#[derive(Parser)]
#[command(name = "planesat", version, about = "SAT searches for finite projective planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the CNF encoding of a plane order or a starting case.
    Encode {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        encoding: EncodingArgs,
        /// Leave out the lex-leader constraints of a case.
        #[arg(long)]
        no_symmetry: bool,
        /// DIMACS output; the variable map goes next to it with extension `.map`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Symmetry group of a case's initial configuration.
    Group {
        #[arg(long)]
        case: PathBuf,
        /// Write the elements here, one per line.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solutions of a case's first-block instance, all and up to isomorphism.
    Enumerate {
        #[arg(long)]
        case: PathBuf,
        #[command(flatten)]
        encoding: EncodingArgs,
        /// External solver for the isomorph-free loop; `{cnf}` placeholder.
        #[arg(long)]
        solver_cmd: Option<String>,
        #[arg(long, default_value = "work")]
        workdir: PathBuf,
        /// Representatives manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label first-block orbits and write one instance per label.
    Label {
        #[arg(long)]
        case: PathBuf,
        #[command(flatten)]
        encoding: EncodingArgs,
        #[arg(long, default_value = "work")]
        workdir: PathBuf,
        /// Only write the first this many instances.
        #[arg(long)]
        max_instances: Option<usize>,
        /// Highest block index in the minimum-label condition.
        #[arg(long)]
        range_max: Option<usize>,
    },
    /// Split a CNF into cubes.
    Cube {
        #[arg(long)]
        cnf: PathBuf,
        #[command(flatten)]
        cubing: CubingArgs,
        #[arg(long, default_value = "work")]
        workdir: PathBuf,
        /// Cube file; defaults to `<workdir>/cubes.icnf`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every cube, logging a DRAT proof per cube.
    Conquer {
        #[arg(long)]
        cnf: PathBuf,
        /// Cube file; a single empty cube when omitted.
        #[arg(long)]
        cubes: Option<PathBuf>,
        #[command(flatten)]
        solving: SolvingArgs,
        #[arg(long, default_value = "work")]
        workdir: PathBuf,
    },
    /// Check the proofs of a finished conquer run.
    Check {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        cubes: Option<PathBuf>,
        #[command(flatten)]
        checking: CheckingArgs,
        #[arg(long, default_value = "work")]
        workdir: PathBuf,
    },
    /// Encode, break symmetries, cube, conquer, check and write results.csv.
    Pipeline {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        encoding: EncodingArgs,
        #[command(flatten)]
        cubing: CubingArgs,
        #[command(flatten)]
        solving: SolvingArgs,
        #[command(flatten)]
        checking: CheckingArgs,
        #[arg(long, default_value = "work")]
        workdir: PathBuf,
        /// Symmetry method for a case; by default the block method for 1a–c.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Whether symmetry clauses take part in cubing.
        #[arg(long)]
        symmetry_in_cubing: Option<bool>,
        /// Only solve the first this many label instances.
        #[arg(long)]
        max_instances: Option<usize>,
        #[arg(long)]
        range_max: Option<usize>,
        /// `omit` leaves the wall-clock columns of results.csv empty.
        #[arg(long, value_enum, default_value = "record")]
        timings: TimingsArg,
    },
    /// Print results files as a table with totals.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Whole plane of this order.
    #[arg(long)]
    order: Option<usize>,
    /// Starting-case file.
    #[arg(long)]
    case: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct EncodingArgs {
    /// Window rows of a case.
    #[arg(long)]
    rows: Option<usize>,
    /// Outside columns of a case.
    #[arg(long)]
    outside: Option<usize>,
    /// 1-based blocks whose non-initial columns are left out.
    #[arg(long, value_delimiter = ',')]
    omit_blocks: Vec<usize>,
    /// Row cardinality constraints.
    #[arg(long)]
    row_card: Option<bool>,
    /// Column cardinality constraints.
    #[arg(long)]
    col_card: Option<bool>,
    /// Relabelling fixed up front for a whole plane.
    #[arg(long, value_enum, default_value = "normalized")]
    canonical: CanonicalArg,
    /// Leave out column-lex clauses of a case.
    #[arg(long)]
    no_column_lex: bool,
}

#[derive(Args, Clone)]
struct CubingArgs {
    /// Stop cubing at this many free variables, or this fraction of them.
    #[arg(long, default_value = "0.75")]
    cutoff: String,
    #[arg(long, default_value_t = 4096)]
    max_cubes: usize,
    /// External cuber; placeholders `{cnf}`, `{cubes}`, `{cutoff}`.
    #[arg(long)]
    cuber_cmd: Option<String>,
}

#[derive(Args, Clone)]
struct SolvingArgs {
    /// Cubes solved in parallel; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// External solver; placeholders `{cnf}` and `{proof}`.
    #[arg(long)]
    solver_cmd: Option<String>,
    /// Per-cube limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Reuse stored per-cube results.
    #[arg(long)]
    resume: bool,
    /// Keep solving cubes after a satisfiable one.
    #[arg(long)]
    all_cubes: bool,
}

#[derive(Args, Clone)]
struct CheckingArgs {
    /// External checker; placeholders `{cnf}` and `{proof}`, accepted on `s VERIFIED`.
    #[arg(long)]
    checker_cmd: Option<String>,
    /// Skip proof checking.
    #[arg(long, conflicts_with = "checker_cmd")]
    no_check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonicalArg {
    None,
    Frame,
    Normalized,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Lex,
    Block,
}

#[derive(Clone, Copy, ValueEnum)]
enum TimingsArg {
    Record,
    Omit,
}

enum Loaded {
    Plane(PlaneParams),
    Case(CaseSpec),
}

impl TargetArgs {
    fn load(&self) -> Result<Loaded> {
        match (&self.order, &self.case) {
            (Some(n), None) => Ok(Loaded::Plane(PlaneParams::new(*n))),
            (None, Some(path)) => Ok(Loaded::Case(load_case(path)?)),
            _ => bail!("give exactly one of --order and --case"),
        }
    }
}

fn load_case(path: &Path) -> Result<CaseSpec> {
    CaseSpec::from_path(path).with_context(|| format!("reading case {}", path.display()))
}

impl EncodingArgs {
    fn plane(&self) -> FullPlaneOptions {
        let d = FullPlaneOptions::default();
        FullPlaneOptions {
            canonical: match self.canonical {
                CanonicalArg::None => Canonical::None,
                CanonicalArg::Frame => Canonical::Frame,
                CanonicalArg::Normalized => Canonical::Normalized,
            },
            row_card: self.row_card.unwrap_or(d.row_card),
            col_card: self.col_card.unwrap_or(d.col_card),
        }
    }

    fn case(&self, spec: &CaseSpec) -> CaseEncodeOptions {
        let d = CaseEncodeOptions::for_case(spec);
        CaseEncodeOptions {
            rows: self.rows.unwrap_or(d.rows),
            include_outside: self.outside.unwrap_or(d.include_outside),
            omit_blocks: self.omit_blocks.clone(),
            column_lex: !self.no_column_lex,
            row_card: self.row_card.unwrap_or(d.row_card),
            col_card: self.col_card.unwrap_or(d.col_card),
        }
    }
}

impl CubingArgs {
    fn cutoff(&self) -> Result<Cutoff> {
        Ok(self.cutoff.parse::<Cutoff>()?)
    }
}

impl SolvingArgs {
    fn conquer(&self, workdir: &Path) -> ConquerOptions {
        let mut o = ConquerOptions::new(workdir);
        if let Some(j) = self.jobs {
            o.jobs = j;
        }
        if let Some(t) = &self.solver_cmd {
            o.solver = ConquerSolver::External(t.clone());
        }
        o.timeout = self.timeout.map(Duration::from_secs_f64);
        o.resume = self.resume;
        o.stop_on_sat = !self.all_cubes;
        o
    }
}

impl CheckingArgs {
    fn checker(&self) -> Option<Checker> {
        if self.no_check {
            None
        } else {
            Some(match &self.checker_cmd {
                Some(t) => Checker::External(t.clone()),
                None => Checker::Internal,
            })
        }
    }
}

fn read_cnf(path: &Path) -> Result<CnfFormula> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(CnfFormula::parse_dimacs(&text)?)
}

fn read_plan(path: Option<&Path>) -> Result<CubePlan> {
    match path {
        None => Ok(CubePlan::single()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(CubePlan {
                cubes: cnc::parse_cube_file(&text)?,
                cutoff: 0,
                source: CubeSource::External(p.display().to_string()),
            })
        }
    }
}

fn write_encoding(enc: &PlaneEncoding, out: &Path) -> Result<()> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(out, enc.formula.to_dimacs())?;
    fs::write(out.with_extension("map"), enc.varmap.to_map_text(&enc.formula))?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Encode { target, encoding, no_symmetry, out } => {
            let enc = match target.load()? {
                Loaded::Plane(params) => encode_full_plane(params, encoding.plane())?,
                Loaded::Case(spec) => {
                    let mut enc = encode_case(&spec, &encoding.case(&spec))?;
                    if !no_symmetry && !spec.id.uses_block_method() {
                        let clauses = pipeline::lex_clauses(&spec, &mut enc).map_err(anyhow::Error::from_boxed)?;
                        enc.formula.extend_clauses(clauses)?;
                    }
                    enc
                }
            };
            write_encoding(&enc, &out)?;
            println!(
                "{}: {} variables ({} cell), {} clauses",
                out.display(),
                enc.formula.var_count(),
                enc.varmap.var_count(),
                enc.formula.len()
            );
        }
        Command::Group { case, out } => {
            let spec = load_case(&case)?;
            let group = pipeline::case_group(&spec)?;
            println!("case {}: group size {}", spec.id, group.size());
            if let Some(expected) = spec.id.expected_group_size() {
                println!("expected {expected}");
            }
            if let Some(out) = out {
                fs::write(&out, group.to_text())?;
            }
        }
        Command::Enumerate { case, encoding, solver_cmd, workdir, out } => {
            let spec = load_case(&case)?;
            let fb = pipeline::first_block(&spec, &encoding.case(&spec)).map_err(anyhow::Error::from_boxed)?;
            let f = &fb.encoding.formula;
            let result = match solver_cmd {
                Some(cmd) => {
                    fs::create_dir_all(&workdir)?;
                    enumerate_noniso_external(f, &fb.vars, &fb.actions, &cmd, &workdir, None)?
                }
                None => enumerate_noniso(f, &fb.vars, &fb.actions)?,
            };
            let all = enumerate_all(f, &fb.vars)?.len();
            println!("first block: {all} solutions, {} up to isomorphism", result.representatives.len());
            if all != result.all_count {
                println!("warning: orbit sizes sum to {}", result.all_count);
            }
            if let Some(out) = out {
                fs::write(&out, result.to_manifest(&fb.scope, fb.actions.len()))?;
            }
        }
        Command::Label { case, encoding, workdir, max_instances, range_max } => {
            let spec = load_case(&case)?;
            let opts = encoding.case(&spec);
            let enc = encode_case(&spec, &opts)?;
            let setup = pipeline::block_setup(&spec, &opts, &enc).map_err(anyhow::Error::from_boxed)?;
            fs::create_dir_all(&workdir)?;
            fs::write(workdir.join("labels.manifest"), setup.labeling.to_manifest())?;
            let range = pipeline::effective_range_max(&spec, &setup, range_max);
            let count = max_instances.map_or(setup.labeling.len(), |m| m.min(setup.labeling.len()));
            for k in 1..=count {
                let (_, full) = pipeline::block_instance(&setup, &enc, k, range).map_err(anyhow::Error::from_boxed)?;
                let inst = PlaneEncoding { formula: full, varmap: enc.varmap.clone() };
                write_encoding(&inst, &workdir.join(format!("label{k:04}.cnf")))?;
            }
            println!(
                "{} first-block solutions, {} labels; wrote {count} instances to {}",
                setup.first_block_solutions,
                setup.labeling.len(),
                workdir.display()
            );
        }
        Command::Cube { cnf, cubing, workdir, out } => {
            let f = read_cnf(&cnf)?;
            let cutoff = cubing.cutoff()?.resolve(cnc::free_variables(&f)?);
            fs::create_dir_all(&workdir)?;
            let plan = match &cubing.cuber_cmd {
                Some(t) => cnc::cube_external(&f, cutoff, t, &workdir)?,
                None => cnc::cube_internal(&f, cutoff, cubing.max_cubes)?,
            };
            let out = out.unwrap_or_else(|| workdir.join("cubes.icnf"));
            fs::write(&out, plan.to_cube_file())?;
            println!("{} cubes at cutoff {cutoff} -> {}", plan.len(), out.display());
        }
        Command::Conquer { cnf, cubes, solving, workdir } => {
            let f = read_cnf(&cnf)?;
            let plan = read_plan(cubes.as_deref())?;
            let outcome = cnc::conquer(&f, &plan, &solving.conquer(&workdir))?;
            for c in &outcome.per_cube {
                println!("cube {:5} {:8} {:9.3}s {:>12} bytes", c.id, c.verdict, c.seconds, c.proof_bytes);
            }
            println!("aggregate {}", outcome.aggregate());
        }
        Command::Check { cnf, cubes, checking, workdir } => {
            let f = read_cnf(&cnf)?;
            let plan = read_plan(cubes.as_deref())?;
            let outcome = cnc::load_outcome(&workdir, plan.len())?;
            let checker = checking.checker().unwrap_or(Checker::Internal);
            let art = cnc::combine_and_check(&f, &plan, &outcome, &checker, &workdir)?;
            for (id, ok) in art.part_verified.iter().enumerate() {
                println!("cube {id:5} {}", if *ok { "VERIFIED" } else { "REJECTED" });
            }
            match art.tautology_verified {
                Some(ok) => println!("cube split {}", if ok { "VERIFIED" } else { "REJECTED" }),
                None => println!("cube split trivial"),
            }
            println!("combined proof {} ({} bytes)", art.combined.display(), art.combined_bytes);
            if !art.verified() {
                bail!("proof check failed");
            }
        }
        Command::Pipeline {
            target,
            encoding,
            cubing,
            solving,
            checking,
            workdir,
            method,
            symmetry_in_cubing,
            max_instances,
            range_max,
            timings,
        } => {
            let target = match target.load()? {
                Loaded::Plane(p) => Target::Plane(p),
                Loaded::Case(spec) => Target::Case(spec),
            };
            let conquer = solving.conquer(&workdir);
            let cfg = PipelineConfig {
                cutoff: cubing.cutoff()?,
                max_cubes: cubing.max_cubes,
                cuber: cubing.cuber_cmd.clone(),
                jobs: conquer.jobs,
                solver: conquer.solver,
                timeout: conquer.timeout,
                resume: conquer.resume,
                stop_on_sat: conquer.stop_on_sat,
                checker: checking.checker(),
                timings: match timings {
                    TimingsArg::Record => Timings::Record,
                    TimingsArg::Omit => Timings::Omit,
                },
                plane: encoding.plane(),
                case: match &target {
                    Target::Case(spec) => Some(encoding.case(spec)),
                    Target::Plane(_) => None,
                },
                method: method.map(|m| match m {
                    MethodArg::Lex => Method::Lex,
                    MethodArg::Block => Method::Block,
                }),
                symmetry_in_cubing,
                max_instances,
                range_max,
                ..PipelineConfig::new(&workdir)
            };
            let report = pipeline::run_pipeline(&target, &cfg)?;
            if let Some(n) = report.first_block_solutions {
                println!("first block: {n} solutions");
            }
            for inst in &report.instances {
                println!(
                    "{:24} {:16} {:6} cubes {:10.3}s {:>12} proof bytes",
                    inst.name,
                    inst.verdict.as_str(),
                    inst.cubes,
                    inst.solve_seconds,
                    inst.proof_bytes
                );
                if inst.model.is_some() {
                    println!("  model: {}", inst.dir.join("model.txt").display());
                }
            }
            println!("result {} ({})", report.aggregate().as_str(), report.csv.display());
        }
        Command::Report { files } => {
            let mut rows = Vec::new();
            for f in &files {
                let file = fs::File::open(f).with_context(|| format!("reading {}", f.display()))?;
                rows.extend(cnc::read_report(file)?);
            }
            println!(
                "{:24} {:>7} {:>8} {:>12} {:>14} verdict",
                "instance", "cubes", "cubing", "solve (s)", "proof bytes"
            );
            for r in &rows {
                println!(
                    "{:24} {:>7} {:>8.4} {:>12.3} {:>14} {}",
                    r.instance, r.cubes, r.cubing_frac, r.solve_seconds, r.proof_bytes, r.verdict
                );
            }
            let cubes: usize = rows.iter().map(|r| r.cubes).sum();
            let secs: f64 = rows.iter().map(|r| r.solve_seconds).sum();
            let bytes: u64 = rows.iter().map(|r| r.proof_bytes).sum();
            println!("{:24} {cubes:>7} {:>8} {secs:>12.3} {bytes:>14}", "total", "");
        }
    }
    Ok(())
}
