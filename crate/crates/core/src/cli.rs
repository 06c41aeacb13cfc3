//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 when a solve fails to converge, 3 for
//! invalid parameters or usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bvp::{self, Diagnostics, SimilaritySolution, SolveOptions};
use crate::error::Error;
use crate::format::number;
use crate::geometry::BodyShape;
use crate::params::{FluidModel, WallModel};
use crate::postprocess::qstar_curve;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "porous-mhd",
    version,
    about = "Similarity solutions for MHD free convection of a power-law fluid in a porous medium"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one parameter point and report θ'(0).
    Solve(PointArgs),
    /// Solve one parameter point and write the η profiles as CSV.
    Profile(PointArgs),
    /// Reproduce a table of −θ'(0) with reference values.
    Table(TableArgs),
    /// Local heat-flux curves q*(φ) for a cylinder or sphere.
    Heatflux(HeatfluxArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Table1,
    Table2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Geometry {
    Plate,
    Cylinder,
    Sphere,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub ode_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub shoot_tol: f64,
    /// Solve on this fixed truncated domain instead of extending it until
    /// θ'(0) settles.
    #[arg(long)]
    pub eta_max: Option<f64>,
}

impl SolverArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            ode_tol: self.ode_tol,
            shoot_tol: self.shoot_tol,
            ..SolveOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Power-law index.
    #[arg(long)]
    pub n: f64,
    /// Viscosity parameter.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// MHD parameter.
    #[arg(long = "N", default_value_t = 0.0)]
    pub big_n: f64,
    /// Wall-temperature exponent.
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Heat-generation integer.
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    /// Heat-generation integer used for the λ = 1 rows.
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct HeatfluxArgs {
    #[arg(long, value_enum)]
    pub geometry: Geometry,
    #[arg(long)]
    pub n: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Comma-separated list of MHD parameters, one curve each.
    #[arg(long = "N", value_delimiter = ',', default_value = "0")]
    pub big_n: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    /// Interior sample count per curve.
    #[arg(long, default_value_t = 181)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub solver: SolverArgs,
}

/// Reference values of `−θ'(0)`, indexed `[n][λ][N]` with n ∈ {0.5, 1, 2},
/// λ ∈ {0, 1} and N ∈ {0, 2, 5, 10}.
pub const TABLE1: [[[f64; 4]; 2]; 3] = [
    [
        [-0.2576, -0.1849, -0.4951, -0.6400],
        [0.1777, 0.2808, -0.0159, -0.1500],
    ],
    [
        [-0.2153, -0.4879, -0.6114, -0.6949],
        [0.2621, -0.0006, -0.1162, -0.1936],
    ],
    [
        [-0.1780, -0.4398, -0.5884, -0.6845],
        [0.3276, 0.0594, -0.0859, -0.1776],
    ],
];

pub const TABLE2: [[[f64; 4]; 2]; 3] = [
    [
        [0.0070, -0.2608, -0.5283, -0.6576],
        [0.4193, 0.2108, -0.0455, -0.1655],
    ],
    [
        [-0.0792, -0.4603, -0.6006, -0.6902],
        [0.3873, 0.0231, -0.1071, -0.1896],
    ],
    [
        [-0.1086, -0.4270, -0.5859, -0.6839],
        [0.3921, 0.0699, -0.0833, -0.1771],
    ],
];

pub const TABLE_N: [f64; 3] = [0.5, 1.0, 2.0];
pub const TABLE_LAMBDA: [f64; 2] = [0.0, 1.0];
pub const TABLE_BIG_N: [f64; 4] = [0.0, 2.0, 5.0, 10.0];

impl Preset {
    pub fn gamma(self) -> f64 {
        match self {
            Preset::Table1 => 0.0,
            Preset::Table2 => 0.5,
        }
    }

    pub fn reference(self) -> &'static [[[f64; 4]; 2]; 3] {
        match self {
            Preset::Table1 => &TABLE1,
            Preset::Table2 => &TABLE2,
        }
    }
}

/// A command failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_invalid_input() {
            Failure {
                code: EXIT_USAGE,
                message: format!("invalid input: {e}"),
            }
        } else {
            Failure {
                code: EXIT_SOLVER,
                message: format!("{} failed: {e}", e.stage()),
            }
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Solve(a) => cmd_solve(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Table(a) => cmd_table(a),
        Command::Heatflux(a) => cmd_heatflux(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let written = match out {
        Some(path) => std::fs::write(path, text).map_err(|e| (path.display().to_string(), e)),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // A closed reader downstream is not a failure of this command.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other.map_err(|e| ("stdout".to_string(), e)),
        },
    };
    written.map_err(|(target, e)| Failure {
        code: EXIT_USAGE,
        message: format!("cannot write {target}: {e}"),
    })
}

fn validated(
    n: f64,
    gamma: f64,
    big_n: f64,
    lambda: f64,
    s: u32,
) -> Result<(FluidModel, WallModel), Failure> {
    let fluid = FluidModel::new(n, gamma, big_n)?;
    let wall = WallModel::new(lambda, s)?;
    wall.validate_with(&fluid)?;
    Ok((fluid, wall))
}

fn check_options(solver: &SolverArgs) -> Result<SolveOptions, Failure> {
    let opts = solver.options();
    opts.validate()?;
    if let Some(l) = solver.eta_max {
        crate::params::positive("eta_max", l)?;
    }
    Ok(opts)
}

fn run_solve(
    fluid: &FluidModel,
    wall: &WallModel,
    solver: &SolverArgs,
    opts: &SolveOptions,
) -> crate::Result<SimilaritySolution> {
    match solver.eta_max {
        Some(l) => bvp::solve_on_domain(fluid, wall, l, opts),
        None => bvp::solve(fluid, wall, opts),
    }
}

#[derive(Serialize)]
struct ParamEcho {
    n: f64,
    gamma: f64,
    #[serde(rename = "N")]
    big_n: f64,
    lambda: f64,
    s: u32,
}

impl ParamEcho {
    fn new(fluid: &FluidModel, wall: &WallModel) -> Self {
        Self {
            n: fluid.n,
            gamma: fluid.gamma,
            big_n: fluid.big_n,
            lambda: wall.lambda,
            s: wall.s,
        }
    }
}

#[derive(Serialize)]
struct SolveDocument<'a> {
    params: ParamEcho,
    theta_prime_0: f64,
    minus_theta_prime_0: f64,
    eta_max: f64,
    diagnostics: &'a Diagnostics,
    options: SolveOptions,
}

fn solve_document(
    sol: &SimilaritySolution,
    fluid: &FluidModel,
    wall: &WallModel,
    opts: &SolveOptions,
) -> String {
    let doc = SolveDocument {
        params: ParamEcho::new(fluid, wall),
        theta_prime_0: sol.theta_prime_0,
        minus_theta_prime_0: sol.minus_theta_prime_0(),
        eta_max: sol.eta_max,
        diagnostics: &sol.diagnostics,
        options: *opts,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("finite values serialize");
    text.push('\n');
    text
}

fn cmd_solve(a: &PointArgs) -> Result<(), Failure> {
    let (fluid, wall) = validated(a.n, a.gamma, a.big_n, a.lambda, a.s)?;
    let opts = check_options(&a.solver)?;
    let sol = run_solve(&fluid, &wall, &a.solver, &opts)?;
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Json => solve_document(&sol, &fluid, &wall, &opts),
        Format::Csv => format!(
            "n,gamma,N,lambda,s,theta_prime_0,minus_theta_prime_0,eta_max\n{},{},{},{},{},{},{},{}\n",
            number(fluid.n),
            number(fluid.gamma),
            number(fluid.big_n),
            number(wall.lambda),
            wall.s,
            number(sol.theta_prime_0),
            number(sol.minus_theta_prime_0()),
            number(sol.eta_max)
        ),
    };
    emit(&a.out, &text)
}

/// Profile CSV, or with `--format json` the solve document plus the
/// profile arrays.
fn cmd_profile(a: &PointArgs) -> Result<(), Failure> {
    let (fluid, wall) = validated(a.n, a.gamma, a.big_n, a.lambda, a.s)?;
    let opts = check_options(&a.solver)?;
    let sol = run_solve(&fluid, &wall, &a.solver, &opts)?;
    let text = match a.format.unwrap_or(Format::Csv) {
        Format::Csv => profile_csv(&sol),
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                params: ParamEcho,
                solution: &'a SimilaritySolution,
            }
            let mut t = serde_json::to_string_pretty(&Doc {
                params: ParamEcho::new(&fluid, &wall),
                solution: &sol,
            })
            .expect("finite values serialize");
            t.push('\n');
            t
        }
    };
    emit(&a.out, &text)
}

pub fn profile_csv(sol: &SimilaritySolution) -> String {
    let mut text = String::from("eta,f,fprime,theta,thetaprime\n");
    for i in 0..sol.len() {
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            number(sol.eta[i]),
            number(sol.f[i]),
            number(sol.fprime[i]),
            number(sol.theta[i]),
            number(sol.theta_prime[i])
        );
    }
    text
}

/// One table cell, in output order.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub n: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub s: u32,
    #[serde(rename = "N")]
    pub big_n: f64,
    pub minus_theta_prime_0: Option<f64>,
    pub ref_value: f64,
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Solves all 24 cells of a preset concurrently; rows come back in grid
/// order regardless of scheduling.
pub fn table_rows(
    preset: Preset,
    s: u32,
    opts: &SolveOptions,
    eta_max: Option<f64>,
) -> Vec<TableRow> {
    let reference = preset.reference();
    let gamma = preset.gamma();
    let mut cells = Vec::with_capacity(24);
    for (i, &n) in TABLE_N.iter().enumerate() {
        for (j, &lambda) in TABLE_LAMBDA.iter().enumerate() {
            for (k, &big_n) in TABLE_BIG_N.iter().enumerate() {
                cells.push((n, lambda, big_n, reference[i][j][k]));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(n, lambda, big_n, ref_value)| {
            let result = FluidModel::new(n, gamma, big_n)
                .and_then(|fluid| Ok((fluid, WallModel::new(lambda, s)?)))
                .and_then(|(fluid, wall)| match eta_max {
                    Some(l) => bvp::solve_on_domain(&fluid, &wall, l, opts),
                    None => bvp::solve(&fluid, &wall, opts),
                });
            let (value, error) = match result {
                Ok(sol) => (Some(sol.minus_theta_prime_0()), None),
                Err(e) => (None, Some(format!("{} failed: {e}", e.stage()))),
            };
            TableRow {
                n,
                lambda,
                gamma,
                s,
                big_n,
                minus_theta_prime_0: value,
                ref_value,
                abs_error: value.map(|v| (v - ref_value).abs()),
                error,
            }
        })
        .collect()
}

fn cmd_table(a: &TableArgs) -> Result<(), Failure> {
    WallModel::new(1.0, a.s)?;
    let opts = check_options(&a.solver)?;
    let rows = table_rows(a.preset, a.s, &opts, a.solver.eta_max);
    let text = match a.format {
        Format::Csv => {
            let mut t =
                String::from("n,lambda,gamma,s,N,minus_theta_prime_0,ref_value,abs_error\n");
            let opt = |v: Option<f64>| v.map_or_else(|| "NaN".to_string(), number);
            for r in &rows {
                let _ = writeln!(
                    t,
                    "{},{},{},{},{},{},{},{}",
                    number(r.n),
                    number(r.lambda),
                    number(r.gamma),
                    r.s,
                    number(r.big_n),
                    opt(r.minus_theta_prime_0),
                    number(r.ref_value),
                    opt(r.abs_error)
                );
            }
            t
        }
        Format::Json => {
            let mut t = serde_json::to_string_pretty(&rows).expect("rows serialize");
            t.push('\n');
            t
        }
    };
    emit(&a.out, &text)?;
    let failed: Vec<&TableRow> = rows.iter().filter(|r| r.error.is_some()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let mut message = format!("{} of {} cells did not converge", failed.len(), rows.len());
    for r in failed {
        let _ = write!(
            message,
            "\n  n={} lambda={} N={}: {}",
            r.n,
            r.lambda,
            r.big_n,
            r.error.as_deref().unwrap_or_default()
        );
    }
    Err(Failure {
        code: EXIT_SOLVER,
        message,
    })
}

fn cmd_heatflux(a: &HeatfluxArgs) -> Result<(), Failure> {
    let (shape, name) = match a.geometry {
        Geometry::Cylinder => (BodyShape::cylinder(1.0, 1.0)?, "cylinder"),
        Geometry::Sphere => (BodyShape::sphere(1.0, 1.0)?, "sphere"),
        Geometry::Plate => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "heatflux curves are defined for cylinder and sphere only".to_string(),
            })
        }
    };
    if a.points < 2 {
        return Err(Error::InvalidParameter {
            name: "points",
            value: a.points as f64,
            reason: "must be at least 2",
        }
        .into());
    }
    if a.big_n.is_empty() {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "--N needs at least one value".to_string(),
        });
    }
    let models = a
        .big_n
        .iter()
        .map(|&big_n| validated(a.n, a.gamma, big_n, a.lambda, a.s))
        .collect::<Result<Vec<_>, _>>()?;
    let opts = check_options(&a.solver)?;
    let curves = models
        .par_iter()
        .map(|(fluid, wall)| {
            let sol = run_solve(fluid, wall, &a.solver, &opts)?;
            qstar_curve(&shape, fluid, wall, &sol, a.points)
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let text = match a.format {
        Format::Csv => {
            let mut t = String::from("geometry,n,lambda,gamma,s,N,phi_rad,qstar\n");
            for c in &curves {
                for (pos, q) in &c.samples {
                    let _ = writeln!(
                        t,
                        "{name},{},{},{},{},{},{},{}",
                        number(c.fluid.n),
                        number(c.wall.lambda),
                        number(c.fluid.gamma),
                        c.wall.s,
                        number(c.fluid.big_n),
                        number(pos.coordinate()),
                        number(*q)
                    );
                }
            }
            t
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Block {
                geometry: &'static str,
                params: ParamEcho,
                theta_prime_0: f64,
                phi_rad: Vec<f64>,
                /// Infinite stagnation limits are written as `null`.
                qstar: Vec<Option<f64>>,
            }
            let blocks: Vec<Block> = curves
                .iter()
                .map(|c| Block {
                    geometry: name,
                    params: ParamEcho::new(&c.fluid, &c.wall),
                    theta_prime_0: c.theta_prime_0,
                    phi_rad: c.samples.iter().map(|(p, _)| p.coordinate()).collect(),
                    qstar: c
                        .samples
                        .iter()
                        .map(|(_, q)| q.is_finite().then_some(*q))
                        .collect(),
                })
                .collect();
            let mut t = serde_json::to_string_pretty(&blocks).expect("blocks serialize");
            t.push('\n');
            t
        }
    };
    emit(&a.out, &text)
}
