//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so it can be driven from tests.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::chsh::{
    chsh_lhs, chsh_lhs_cm, maximize_settings, scan, ChshSettings, ExtremumMode, ScanOptions,
    ScanResult, CLASSICAL_BOUND, DEFAULT_GRID,
};
use crate::correlation::{
    correlation_closed, correlation_planar, correlation_trace, MeasurementSettings,
};
use crate::decay::{cm_kinematics, planar_kinematics, BlochVector, DecayKinematics, InnerParity};
use crate::figures::{preset, Curve};
use crate::minkowski::ThreeDirection;
use crate::selftest::{self, SelfTestOptions};
use crate::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PHYSICS: u8 = 2;
pub const EXIT_SELFTEST: u8 = 3;

/// EPR correlations and CHSH analysis for a photon + spin-1/2 fermion pair
/// from a polarized two-body decay.
///
/// Grid evaluation uses all cores; set RAYON_NUM_THREADS to limit workers.
#[derive(Debug, Parser)]
#[command(name = "hybrid-epr", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Digits after the decimal point in CSV/text output.
    #[arg(long, default_value_t = 6, global = true, value_parser = clap::value_parser!(u8).range(6..=17))]
    pub digits: u8,

    /// Interpret every angle argument in degrees.
    #[arg(long, global = true)]
    pub deg: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the correlation function at one point.
    Eval(EvalArgs),
    /// Sample the planar correlation function over a range of x.
    Scan(ScanArgs),
    /// Sample the CHSH left-hand side over a range of x.
    ChshScan(ChshScanArgs),
    /// Maximize the CHSH left-hand side over all six measurement angles.
    ChshMax(ChshMaxArgs),
    /// Run the built-in invariant checks and print a JSON report.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Use the closed planar formula only (fermion mass 1, spin along z).
    #[arg(long)]
    pub planar: bool,
    /// Report the trace and closed-form routes and their difference.
    #[arg(long, conflicts_with = "planar")]
    pub cross_check: bool,
    /// Squared fermion momentum in units of its mass.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    /// Fermion emission angle in the decay plane.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub psi: f64,
    /// Polar angle of the fermion spin axis.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub sigma: f64,
    /// Azimuth of the fermion spin axis.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Polarizer angle for the photon.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Fermion mass.
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Photon energy in the frame where the photon runs along x.
    #[arg(long, default_value_t = 1.0)]
    pub k0: f64,
    /// Parent mass; switches to the parent rest frame with the fermion
    /// emitted at angle psi in the xy-plane (x is then ignored).
    #[arg(long)]
    pub parent_mass: Option<f64>,
    /// Parent polarization vector, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.0, 1.0], allow_hyphen_values = true)]
    pub xi: Vec<f64>,
    /// Use opposite inner parities for parent and fermion.
    #[arg(long)]
    pub opposite_parity: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Lower end of the x range.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    /// Upper end of the x range.
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    /// Number of grid points.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub n: usize,
    /// Append the extremum and crossings as a JSON footer line.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Load the parameter set of a reference curve (2 or 3).
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub figure: Option<u8>,
    /// Fermion emission angle; overrides the preset.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<f64>,
    /// Polar angle of the spin axis; overrides the preset.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Azimuth of the spin axis; overrides the preset.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Polarizer angle; overrides the preset.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Locate the minimum instead of the maximum.
    #[arg(long)]
    pub min: bool,
    /// Level whose crossings are reported in the summary.
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct ChshAngleArgs {
    /// Polar angle of the first spin axis.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma1: Option<f64>,
    /// Azimuth of the first spin axis.
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: Option<f64>,
    /// First polarizer angle.
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    /// Polar angle of the second spin axis.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma2: Option<f64>,
    /// Azimuth of the second spin axis.
    #[arg(long, allow_hyphen_values = true)]
    pub phi2: Option<f64>,
    /// Second polarizer angle.
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ChshScanArgs {
    /// Load the parameter set of a reference curve (4, 5 or 6).
    #[arg(long, value_parser = clap::value_parser!(u8).range(4..=6))]
    pub figure: Option<u8>,
    /// Fermion emission angle; overrides the preset.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<f64>,
    #[command(flatten)]
    pub angles: ChshAngleArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct ChshMaxArgs {
    /// Optimize the rest-frame expression.
    #[arg(long, conflicts_with_all = ["x", "psi"])]
    pub cm: bool,
    /// Squared fermion momentum in units of its mass.
    #[arg(long, required_unless_present = "cm", allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Fermion emission angle.
    #[arg(long, required_unless_present = "cm", allow_hyphen_values = true)]
    pub psi: Option<f64>,
    /// Number of random starting points.
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    /// Seed of the start-point sequence.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Stopping tolerance on the objective.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Seed of the random inputs.
    #[arg(long, default_value_t = SelfTestOptions::default().seed)]
    pub seed: u64,
    /// Random inputs per identity check.
    #[arg(long, default_value_t = SelfTestOptions::default().samples)]
    pub samples: usize,
    /// Perturb one gamma matrix to confirm the suite detects it.
    #[arg(long, hide = true)]
    pub corrupt_gamma: bool,
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Physics(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Physics(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let out = Printer {
        format: cli.format,
        digits: cli.digits as usize,
    };
    let angle = |v: f64| if cli.deg { v.to_radians() } else { v };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, &out, angle),
        Command::Scan(a) => cmd_scan(a, &out, angle),
        Command::ChshScan(a) => cmd_chsh_scan(a, &out, angle),
        Command::ChshMax(a) => cmd_chsh_max(a, &out, angle),
        Command::Selftest(a) => return cmd_selftest(a),
    };
    match result {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Physics(e)) => Outcome {
            code: EXIT_PHYSICS,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Printer {
    format: Format,
    digits: usize,
}

impl Printer {
    fn num(&self, v: f64) -> String {
        let s = format!("{:.*}", self.digits, v);
        // avoid "-0.000000" for values that round to zero
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }

    fn json(value: &impl Serialize) -> String {
        let mut s = serde_json::to_string(value).expect("report types serialize");
        s.push('\n');
        s
    }
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("{name} must be finite, got {v}")))
    }
}

fn cmd_eval(a: &EvalArgs, out: &Printer, angle: impl Fn(f64) -> f64) -> CliResult<String> {
    let psi = angle(finite("psi", a.psi)?);
    let sigma = angle(finite("sigma", a.sigma)?);
    let phi = angle(finite("phi", a.phi)?);
    let theta = angle(finite("theta", a.theta)?);
    finite("x", a.x)?;

    if a.planar {
        if a.x < 0.0 {
            return Err(
                Error::InvalidArgument(format!("x must be non-negative, got {}", a.x)).into(),
            );
        }
        let value = correlation_planar(a.x, psi, sigma, phi, theta);
        return Ok(match out.format {
            Format::Csv => format!("value\n{}\n", out.num(value)),
            Format::Json => Printer::json(&json!({ "value": value })),
        });
    }

    let [x1, x2, x3] = a.xi[..] else {
        return Err(Failure::Usage(format!(
            "--xi takes three components, got {}",
            a.xi.len()
        )));
    };
    let kin = eval_kinematics(a, psi)?;
    let xi = BlochVector::new(x1, x2, x3)?;
    let s = MeasurementSettings::from_angles(sigma, phi, theta);
    let a_k = ThreeDirection::Z;
    let parity = if a.opposite_parity {
        InnerParity::Opposite
    } else {
        InnerParity::Equal
    };
    let closed = correlation_closed(&kin, &xi, &s, &a_k, parity)?;
    if !a.cross_check {
        return Ok(match out.format {
            Format::Csv => format!("value\n{}\n", out.num(closed)),
            Format::Json => Printer::json(&json!({ "value": closed })),
        });
    }
    let trace = correlation_trace(&kin, &xi, &s, &a_k, parity)?;
    let diff = (closed - trace).abs();
    Ok(match out.format {
        Format::Csv => format!(
            "closed,trace,difference\n{},{},{:e}\n",
            out.num(closed),
            out.num(trace),
            diff
        ),
        Format::Json => {
            Printer::json(&json!({ "closed": closed, "trace": trace, "difference": diff }))
        }
    })
}

fn eval_kinematics(a: &EvalArgs, psi: f64) -> CliResult<DecayKinematics> {
    Ok(match a.parent_mass {
        Some(big_m) => {
            let n_p = ThreeDirection::from_angles(
                std::f64::consts::FRAC_PI_2,
                std::f64::consts::FRAC_PI_2 - psi,
            );
            cm_kinematics(big_m, a.mass, &n_p)?
        }
        None => planar_kinematics(a.mass, a.x, psi, a.k0)?,
    })
}

fn grid_range(g: &GridArgs, default: (f64, f64)) -> CliResult<(f64, f64)> {
    let lo = finite("lo", g.lo.unwrap_or(default.0))?;
    let hi = finite("hi", g.hi.unwrap_or(default.1))?;
    if !(lo < hi) {
        return Err(Failure::Usage(format!(
            "grid needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    if g.n < 2 {
        return Err(Failure::Usage(format!(
            "grid needs at least 2 points, got {}",
            g.n
        )));
    }
    if lo < 0.0 {
        return Err(
            Error::InvalidArgument(format!("x must be non-negative, got lo = {lo}")).into(),
        );
    }
    Ok((lo, hi))
}

fn pick(
    name: &str,
    explicit: Option<f64>,
    preset: Option<f64>,
    angle: &impl Fn(f64) -> f64,
) -> CliResult<f64> {
    match (explicit, preset) {
        (Some(v), _) => Ok(angle(finite(name, v)?)),
        (None, Some(v)) => Ok(v),
        (None, None) => Err(Failure::Usage(format!(
            "--{name} is required without --figure"
        ))),
    }
}

fn cmd_scan(a: &ScanArgs, out: &Printer, angle: impl Fn(f64) -> f64) -> CliResult<String> {
    let fig = a.figure.map(preset).transpose()?;
    let fig_values = match fig.as_ref().map(|p| p.curve) {
        Some(Curve::Correlation {
            psi,
            polar,
            azimuth,
            theta,
        }) => Some([psi, polar, azimuth, theta]),
        _ => None,
    };
    let from_fig = |i: usize| fig_values.map(|v| v[i]);
    let psi = pick("psi", a.psi, from_fig(0), &angle)?;
    let sigma = pick("sigma", a.sigma, from_fig(1), &angle)?;
    let phi = pick("phi", a.phi, from_fig(2), &angle)?;
    let theta = pick("theta", a.theta, from_fig(3), &angle)?;
    let default_range = fig.as_ref().map_or((0.0, 10.0), |p| (p.lo, p.hi));
    let (lo, hi) = grid_range(&a.grid, default_range)?;
    let mode = if a.min || fig.as_ref().is_some_and(|p| p.mode == ExtremumMode::Min) {
        ExtremumMode::Min
    } else {
        ExtremumMode::Max
    };
    let opts = ScanOptions {
        mode,
        threshold: a.threshold,
        ..ScanOptions::default()
    };
    let result = scan(
        |x| correlation_planar(x, psi, sigma, phi, theta),
        lo,
        hi,
        a.grid.n,
        &opts,
    )?;
    Ok(render_scan(&result, out, a.grid.summary, a.threshold))
}

fn cmd_chsh_scan(a: &ChshScanArgs, out: &Printer, angle: impl Fn(f64) -> f64) -> CliResult<String> {
    let fig = a.figure.map(preset).transpose()?;
    let (fig_psi, fig_angles) = match fig.as_ref().map(|p| p.curve) {
        Some(Curve::Chsh { psi, angles }) => (Some(psi), Some(angles)),
        _ => (None, None),
    };
    let psi = pick("psi", a.psi, fig_psi, &angle)?;
    let g = &a.angles;
    let names = ["sigma1", "phi1", "theta1", "sigma2", "phi2", "theta2"];
    let explicit = [g.sigma1, g.phi1, g.theta1, g.sigma2, g.phi2, g.theta2];
    let mut angles = [0.0; 6];
    for i in 0..6 {
        angles[i] = pick(names[i], explicit[i], fig_angles.map(|f| f[i]), &angle)?;
    }
    let settings = ChshSettings::from_angles(angles);
    let default_range = fig.as_ref().map_or((0.0, 20.0), |p| (p.lo, p.hi));
    let (lo, hi) = grid_range(&a.grid, default_range)?;
    let opts = ScanOptions {
        threshold: Some(CLASSICAL_BOUND),
        ..ScanOptions::default()
    };
    let result = scan(|x| chsh_lhs(x, psi, &settings), lo, hi, a.grid.n, &opts)?;
    Ok(render_scan(
        &result,
        out,
        a.grid.summary,
        Some(CLASSICAL_BOUND),
    ))
}

#[derive(Serialize)]
struct ScanSummary<'a> {
    extremum: &'a crate::chsh::Extremum,
    threshold: Option<f64>,
    crossings: &'a [f64],
    touches: &'a [f64],
}

fn render_scan(r: &ScanResult, out: &Printer, summary: bool, threshold: Option<f64>) -> String {
    let sum = ScanSummary {
        extremum: &r.extremum,
        threshold,
        crossings: &r.crossings,
        touches: &r.touches,
    };
    match out.format {
        Format::Csv => {
            let mut s = String::from("x,value\n");
            for &(x, v) in &r.samples {
                let _ = writeln!(s, "{},{}", out.num(x), out.num(v));
            }
            if summary {
                s.push_str("# ");
                s.push_str(&Printer::json(&sum));
            }
            s
        }
        Format::Json => {
            let samples: Vec<_> = r
                .samples
                .iter()
                .map(|&(x, value)| json!({ "x": x, "value": value }))
                .collect();
            let mut obj = json!({ "samples": samples });
            if summary {
                obj["summary"] = serde_json::to_value(&sum).expect("summary serializes");
            }
            Printer::json(&obj)
        }
    }
}

fn cmd_chsh_max(a: &ChshMaxArgs, out: &Printer, angle: impl Fn(f64) -> f64) -> CliResult<String> {
    if a.starts == 0 {
        return Err(Failure::Usage("--starts must be at least 1".into()));
    }
    if !(a.tol > 0.0) {
        return Err(Failure::Usage(format!(
            "--tol must be positive, got {}",
            a.tol
        )));
    }
    let optimum = if a.cm {
        maximize_settings(chsh_lhs_cm, a.starts, a.tol, a.seed)?
    } else {
        let x = finite("x", a.x.expect("clap enforces x"))?;
        if x < 0.0 {
            return Err(Error::InvalidArgument(format!("x must be non-negative, got {x}")).into());
        }
        let psi = angle(finite("psi", a.psi.expect("clap enforces psi"))?);
        maximize_settings(
            |s: &ChshSettings| chsh_lhs(x, psi, s),
            a.starts,
            a.tol,
            a.seed,
        )?
    };
    // same directions and polarizer angles, reported in canonical ranges
    let angles = optimum
        .settings()
        .to_angles()
        .map(|v| v.rem_euclid(std::f64::consts::TAU));
    let [s1, p1, t1, s2, p2, t2] = angles;
    let report = json!({
        "settings": { "sigma1": s1, "phi1": p1, "theta1": t1, "sigma2": s2, "phi2": p2, "theta2": t2 },
        "value": optimum.value,
        "start": optimum.start,
        "starts": optimum.starts,
        "seed": optimum.seed,
    });
    Ok(match out.format {
        Format::Json => Printer::json(&report),
        Format::Csv => {
            let mut s = String::from("sigma1,phi1,theta1,sigma2,phi2,theta2,value\n");
            let cells: Vec<String> = angles
                .iter()
                .chain([optimum.value].iter())
                .map(|&v| out.num(v))
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
            s
        }
    })
}

fn cmd_selftest(a: &SelftestArgs) -> Outcome {
    let opts = SelfTestOptions {
        seed: a.seed,
        samples: a.samples.max(1),
        corrupt_gamma: a.corrupt_gamma,
        ..SelfTestOptions::default()
    };
    let report = selftest::run(&opts);
    let stdout = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if report.passed {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        Outcome {
            code: EXIT_SELFTEST,
            stdout,
            stderr: format!("selftest failed: {}\n", failed.join(", ")),
        }
    }
}
