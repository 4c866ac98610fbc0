//! `idpack`: validate, repair and flow inversive distance packings stored as
//! JSON problem files.
//!
//! Exit codes: 0 success, 1 invalid input, 2 solver failure, 3 unreadable or
//! malformed files. Errors are reported on stderr as one JSON object.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use idpack::delaunay::{delaunayize, is_local_delaunay};
use idpack::flow::{curvature, flow, gauss_bonnet_residual, uniform_target, FlowConfig, Method};
use idpack::hyperbolic::{canonical_form, equivalent};
use idpack::io::{flip_log_json, FileError, ProblemFile};
use idpack::selftest::run_selftest;
use idpack::Packing;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "idpack", version, about = "Inversive distance circle packings on closed surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a problem file and report counts and per-edge Delaunay slacks.
    Validate { file: PathBuf },
    /// Print vertex curvatures and the Gauss-Bonnet residual.
    Curvature { file: PathBuf },
    /// Flip edges until the packing is weighted Delaunay.
    Delaunayize {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Where to write the repaired problem file (stdout if absent).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Where to write the flip log as JSON.
        #[arg(long)]
        flip_log: Option<PathBuf>,
    },
    /// Run the Ricci flow with surgery towards a target curvature.
    Flow {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// `uniform` for 2πχ/n at every vertex, `file` for the file's target.
        /// Defaults to the file's target when present.
        #[arg(long, value_enum)]
        target: Option<TargetArg>,
        /// Where to write the resulting problem file.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Where to write the per-iteration trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Write the canonical representative of the packing's conformal class.
    Canonical {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide whether two packings are discretely conformally equivalent.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Agreement tolerance for the canonical forms.
        #[arg(long, default_value_t = 1e-8)]
        agree_tol: f64,
    },
    /// Run the randomized identity suites and print their worst residuals.
    Selftest {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Clone, Copy, Default)]
struct SolverArgs {
    /// Curvature tolerance of the flow.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Maximum number of flips in one surgery pass.
    #[arg(long)]
    flip_budget: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Euler,
    Newton,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum TargetArg {
    Uniform,
    File,
}

enum Failure {
    Core(idpack::Error),
    File(FileError),
    Usage(String),
    Check(String),
}

impl From<idpack::Error> for Failure {
    fn from(e: idpack::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::File(e)
    }
}

impl Failure {
    fn report(&self) -> (&'static str, String, u8) {
        match self {
            Failure::Core(e) => (e.kind(), e.to_string(), if e.is_solver_failure() { 2 } else { 1 }),
            Failure::File(e @ FileError::Io { .. }) => ("IoError", e.to_string(), 3),
            Failure::File(e @ FileError::Json(_)) => ("JsonError", e.to_string(), 3),
            Failure::Usage(m) => ("UsageError", m.clone(), 1),
            Failure::Check(m) => ("SelftestFailed", m.clone(), 1),
        }
    }
}

type Outcome = Result<(), Failure>;

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn write_text(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|source| {
        Failure::File(FileError::Io {
            path: path.display().to_string(),
            source,
        })
    })
}

fn emit_problem(file: &ProblemFile, output: Option<&Path>) -> Outcome {
    match output {
        Some(p) => Ok(file.write(p)?),
        None => {
            println!("{}", file.to_json());
            Ok(())
        }
    }
}

fn config_for(file: &ProblemFile, solver: SolverArgs) -> FlowConfig {
    let mut cfg = file.flow_config();
    if let Some(t) = solver.tol {
        cfg.tol = t;
    }
    if let Some(n) = solver.max_iters {
        cfg.max_iters = n;
    }
    if let Some(b) = solver.flip_budget {
        cfg.flips.budget = Some(b);
    }
    cfg
}

fn validate(path: &Path) -> Outcome {
    let file = ProblemFile::read(path)?;
    let pk = file.to_packing()?;
    let tri = pk.tri();
    file.target(tri)?;
    let slacks: Vec<Value> = (0..tri.num_edges())
        .map(|e| match pk.hinge_data(e).and_then(|h| is_local_delaunay(&h)) {
            Ok(s) => json!(s),
            Err(_) => Value::Null,
        })
        .collect();
    let bad_faces: Vec<usize> = (0..tri.num_faces()).filter(|&f| pk.face_geometry(f).is_err()).collect();
    print(&json!({
        "valid": true,
        "num_vertices": tri.num_vertices(),
        "num_edges": tri.num_edges(),
        "num_faces": tri.num_faces(),
        "euler_characteristic": tri.euler_characteristic(),
        "genus": tri.genus(),
        "slacks": slacks,
        "delaunay": slacks.iter().all(|s| s.as_f64().is_some_and(|s| s >= 0.0)),
        "faces_violating_triangle_inequality": bad_faces,
    }));
    Ok(())
}

fn curvature_cmd(path: &Path) -> Outcome {
    let pk = ProblemFile::read(path)?.to_packing()?;
    let state = curvature(&pk)?;
    print(&json!({
        "curvature": state.curvatures,
        "cone_angles": state.cone_angles,
        "gauss_bonnet_residual": gauss_bonnet_residual(pk.tri(), &state.curvatures),
    }));
    Ok(())
}

fn delaunayize_cmd(path: &Path, solver: SolverArgs, output: Option<&Path>, flip_log: Option<&Path>) -> Outcome {
    let file = ProblemFile::read(path)?;
    let pk = file.to_packing()?;
    let cfg = config_for(&file, solver);
    let (done, log) = delaunayize(&pk, &cfg.flips)?;
    if let Some(p) = flip_log {
        write_text(p, &(flip_log_json(&log) + "\n"))?;
    }
    let mut out = ProblemFile::from_packing(&done);
    out.target = file.target.clone();
    out.config = file.config.clone();
    emit_problem(&out, output)?;
    if output.is_some() {
        print(&json!({ "flips": log.len() }));
    }
    Ok(())
}

fn resolve_target(file: &ProblemFile, pk: &Packing, choice: Option<TargetArg>) -> Result<Vec<f64>, Failure> {
    let from_file = file.target(pk.tri())?;
    match (choice, from_file) {
        (Some(TargetArg::Uniform), _) | (None, None) => Ok(uniform_target(pk.tri())),
        (_, Some(t)) => Ok(t),
        (Some(TargetArg::File), None) => Err(Failure::Usage("--target file needs a target section".into())),
    }
}

fn flow_cmd(
    path: &Path,
    solver: SolverArgs,
    method: Option<MethodArg>,
    target: Option<TargetArg>,
    output: Option<&Path>,
    trace_path: Option<&Path>,
) -> Outcome {
    let file = ProblemFile::read(path)?;
    let pk = file.to_packing()?;
    let mut cfg = config_for(&file, solver);
    if let Some(m) = method {
        cfg.method = match m {
            MethodArg::Euler => Method::Euler,
            MethodArg::Newton => Method::Newton,
        };
    }
    let goal = resolve_target(&file, &pk, target)?;
    let (sol, trace) = flow(&pk, &goal, &cfg)?;
    if let Some(p) = trace_path {
        write_text(p, &trace.to_csv())?;
    }
    if let Some(p) = output {
        let mut out = ProblemFile::from_packing(&sol).with_target(goal.clone());
        out.config = file.config.clone();
        out.write(p)?;
    }
    print(&json!({
        "method": cfg.method,
        "iterations": trace.iterations(),
        "max_err": trace.final_error(),
        "total_flips": trace.total_flips(),
        "trace": trace.records,
    }));
    Ok(())
}

fn canonical_cmd(path: &Path, solver: SolverArgs, output: Option<&Path>) -> Outcome {
    let file = ProblemFile::read(path)?;
    let pk = file.to_packing()?;
    let c = canonical_form(&pk, &config_for(&file, solver))?;
    emit_problem(&ProblemFile::from_packing(&c), output)
}

fn equiv_cmd(a: &Path, b: &Path, solver: SolverArgs, tol: f64) -> Outcome {
    let fa = ProblemFile::read(a)?;
    let fb = ProblemFile::read(b)?;
    let same = equivalent(&fa.to_packing()?, &fb.to_packing()?, tol, &config_for(&fa, solver))?;
    print(&json!({ "equivalent": same }));
    Ok(())
}

fn selftest_cmd(samples: usize, seed: u64) -> Outcome {
    let report = run_selftest(samples, seed)?;
    print(&serde_json::to_value(&report).expect("reports serialize"));
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.suites.iter().filter(|s| !s.passed).map(|s| s.name).collect();
        Err(Failure::Check(format!("suites above threshold: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Curvature { file } => curvature_cmd(&file),
        Command::Delaunayize {
            file,
            solver,
            output,
            flip_log,
        } => delaunayize_cmd(&file, solver, output.as_deref(), flip_log.as_deref()),
        Command::Flow {
            file,
            solver,
            method,
            target,
            output,
            trace,
        } => flow_cmd(&file, solver, method, target, output.as_deref(), trace.as_deref()),
        Command::Canonical { file, solver, output } => canonical_cmd(&file, solver, output.as_deref()),
        Command::Equiv {
            first,
            second,
            solver,
            agree_tol,
        } => equiv_cmd(&first, &second, solver, agree_tol),
        Command::Selftest { samples, seed } => selftest_cmd(samples, seed),
    }
}

fn fail(f: Failure) -> ExitCode {
    let (kind, message, code) = f.report();
    eprintln!("{}", json!({ "error": kind, "message": message, "exit_code": code }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(Failure::Usage(e.render().to_string())),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(f),
    }
}
