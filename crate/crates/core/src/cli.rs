//! Command driver behind the `disc-uniform` binary.
//!
//! Every command prints one JSON document on stdout; logs go to stderr.
//! Exit codes: 0 success, 1 validation failure or other error, 2 unreadable
//! input, 3 flip limit exceeded, 4 solver not converged (the partial result
//! is still printed), 5 positive Euler characteristic.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde::Serialize;
use serde_json::json;

use crate::delaunay::{conformal_flow, height_sums, make_weighted_delaunay, DelaunayOptions, FlipLog};
use crate::energy::{evaluate, EnergyOptions};
use crate::error::Error;
use crate::io::{load_conformal_factor, LoadError, ResultFile, SurfaceFile};
use crate::metric::{validate_metric, MetricTolerances};
use crate::uniformizer::{uniformize_trace, SolverOptions};
use crate::{DecoratedMetric, Mesh};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FLIP_LIMIT: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;
pub const EXIT_POSITIVE_EULER: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "disc-uniform", version, about = "Constant discrete curvature for decorated surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check separation and triangle inequalities.
    Validate(InputArgs),
    /// Angle defects, dual-cell areas and curvatures at a conformal factor.
    Curvature(InputArgs),
    /// Flip to a weighted Delaunay triangulation and report height sums.
    Delaunay(InputArgs),
    /// Solve for constant discrete Gaussian curvature.
    Uniformize(UniformizeArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Surface file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Conformal factor: a JSON array or an object with a "u" array.
    #[arg(long)]
    pub u: Option<PathBuf>,
    /// Also write the report to this file.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UniformizeArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
}

/// Exit code and stdout of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn report(code: i32, value: &impl Serialize) -> Self {
        let stdout = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
        Outcome { code, stdout }
    }

    fn error(code: i32, message: String) -> Self {
        warn!("{message}");
        Outcome::report(code, &json!({ "error": message }))
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::FlipLimitExceeded { .. } => EXIT_FLIP_LIMIT,
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        Error::PositiveEuler { .. } => EXIT_POSITIVE_EULER,
        _ => EXIT_FAILURE,
    }
}

fn load_error(err: LoadError) -> Outcome {
    let code = match &err {
        LoadError::Parse(_) => EXIT_PARSE,
        LoadError::Io { .. } => EXIT_FAILURE,
        LoadError::Invalid(e) => exit_code(e),
    };
    Outcome::error(code, err.to_string())
}

/// Parses arguments (first item is the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) if !e.use_stderr() => Outcome { code: EXIT_OK, stdout: e.to_string() },
        Err(e) => {
            eprint!("{e}");
            Outcome { code: EXIT_PARSE, stdout: String::new() }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let (outcome, output) = match &cli.command {
        Command::Validate(a) => (cmd_validate(a), &a.output),
        Command::Curvature(a) => (cmd_curvature(a), &a.output),
        Command::Delaunay(a) => (cmd_delaunay(a), &a.output),
        Command::Uniformize(a) => (cmd_uniformize(a), &a.io.output),
    };
    if let Some(path) = output {
        if let Err(e) = std::fs::write(path, &outcome.stdout) {
            return Outcome::error(EXIT_FAILURE, format!("cannot write {}: {e}", path.display()));
        }
    }
    outcome
}

struct Loaded {
    mesh: Mesh,
    dm: DecoratedMetric,
    /// Flips made while moving to the `--u` factor.
    flow: FlipLog,
}

/// Reads the surface and, if `--u` is given, moves it to that factor.
fn load(args: &InputArgs) -> Result<Loaded, Outcome> {
    let file = SurfaceFile::load(&args.input).map_err(load_error)?;
    let (mut mesh, mut dm) = file.build().map_err(|e| Outcome::error(exit_code(&e), e.to_string()))?;
    let mut flow = FlipLog::default();
    if let Some(path) = &args.u {
        let u = load_conformal_factor(path).map_err(load_error)?;
        if u.len() != mesh.vertex_count() {
            return Err(Outcome::error(
                EXIT_FAILURE,
                format!("{} has {} entries for {} vertices", path.display(), u.len(), mesh.vertex_count()),
            ));
        }
        flow = conformal_flow(&mut mesh, &mut dm, &u, &DelaunayOptions::default())
            .map_err(|e| Outcome::error(exit_code(&e), e.to_string()))?;
    }
    Ok(Loaded { mesh, dm, flow })
}

pub fn cmd_validate(args: &InputArgs) -> Outcome {
    let Loaded { mesh, dm, .. } = match load(args) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let violations = validate_metric(&mesh, &dm, MetricTolerances::default());
    for v in &violations {
        warn!("{v}");
    }
    let code = if violations.is_empty() { EXIT_OK } else { EXIT_FAILURE };
    Outcome::report(
        code,
        &json!({
            "valid": violations.is_empty(),
            "vertices": mesh.vertex_count(),
            "edges": mesh.edge_count(),
            "faces": mesh.face_count(),
            "chi": mesh.euler_characteristic(),
            "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }),
    )
}

pub fn cmd_curvature(args: &InputArgs) -> Outcome {
    let Loaded { mut mesh, mut dm, flow } = match load(args) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let opts = EnergyOptions { hessian: false, ..EnergyOptions::default() };
    let report = match evaluate(&mut mesh, &mut dm, &opts) {
        Ok(r) => r,
        Err(e) => return Outcome::error(exit_code(&e), e.to_string()),
    };
    let chi = report.euler_characteristic;
    let sum_w = report.angle_defect_sum();
    eprintln!("Gauss-Bonnet: sum W = {sum_w:.15}, 2*pi*chi = {:.15}", 2.0 * PI * chi as f64);
    Outcome::report(
        EXIT_OK,
        &json!({
            "u": dm.conformal_factor(),
            "faces": report.faces,
            "K": report.curvatures,
            "W": report.angle_defects,
            "A": report.areas,
            "A_tot": report.total_area,
            "E": report.energy,
            "chi": chi,
            "sum_W": sum_w,
            "two_pi_chi": 2.0 * PI * chi as f64,
            "flips": report.flips + flow.flip_count(),
        }),
    )
}

pub fn cmd_delaunay(args: &InputArgs) -> Outcome {
    let Loaded { mut mesh, mut dm, flow } = match load(args) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let mut log = match make_weighted_delaunay(&mut mesh, &mut dm, &DelaunayOptions::default()) {
        Ok(l) => l,
        Err(e) => return Outcome::error(exit_code(&e), e.to_string()),
    };
    log.flips.splice(0..0, flow.flips);
    let sums = match height_sums(&mesh, &dm) {
        Ok(s) => s,
        Err(e) => return Outcome::error(exit_code(&e), e.to_string()),
    };
    info!("{} flips", log.flip_count());
    let flipped: Vec<_> = log
        .flips
        .iter()
        .map(|r| json!({ "edge": r.edge.0, "height_sum": r.height_sum }))
        .collect();
    Outcome::report(
        EXIT_OK,
        &json!({
            "faces": mesh.face_list(),
            "flips": log.flip_count(),
            "flip_log": flipped,
            "tolerance": log.tolerance,
            "height_sums": sums,
            "min_height_sum": sums.iter().copied().fold(f64::INFINITY, f64::min),
            "u": dm.conformal_factor(),
            "surface": SurfaceFile::from_surface(&mesh, &dm),
        }),
    )
}

pub fn cmd_uniformize(args: &UniformizeArgs) -> Outcome {
    if !(args.tol > 0.0) || args.max_iters == 0 {
        return Outcome::error(EXIT_FAILURE, "--tol must be positive and --max-iters at least 1".into());
    }
    let Loaded { mesh, dm, .. } = match load(&args.io) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let opts = SolverOptions { residual_tol: args.tol, max_iters: args.max_iters, ..SolverOptions::default() };
    match uniformize_trace(&mesh, &dm, &opts) {
        Ok(result) => {
            let code = if result.converged { EXIT_OK } else { EXIT_NOT_CONVERGED };
            if result.converged {
                info!("converged in {} iterations, K = {}", result.iterations, result.k_bar);
            } else {
                warn!("not converged after {} iterations (residual {:e})", result.iterations, result.residual);
            }
            Outcome::report(code, &ResultFile::from(&result))
        }
        Err(e) => Outcome::error(exit_code(&e), e.to_string()),
    }
}
