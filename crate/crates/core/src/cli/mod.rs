//! `dirac-step` command line.
//!
//! Exit status: 0 success, 1 parameter error, 2 verification failure,
//! 3 I/O error.

pub mod figures;
pub mod sweep;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{RawConfig, StepConfig};
use crate::entanglement::{entropy_scan, evaluate_point, extremal_points, EntanglementReport, PointObservables};
use crate::error::Error;
use crate::kinematics::{IncidenceAngle, ZoneSide};
use crate::verify::{run_suite, SuiteOptions};
use figures::Figure;
use sweep::{to_csv, SweepRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Param(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{failed} verification check(s) failed")]
    Verification { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) | CliError::Usage(_) => 1,
            CliError::Verification { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Dirac bi-spinor scattering on a 2D step potential.
#[derive(Debug, Parser)]
#[command(name = "dirac-step", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every derived quantity at one incidence angle.
    Point(PointArgs),
    /// CSV table over a uniform grid in sin(theta).
    Sweep(SweepArgs),
    /// Datasets and gnuplot scripts for the standard figures.
    Figures(FiguresArgs),
    /// Closed forms against the oracle, conservation, limits and symmetries.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
struct ParamArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Mass ratio m/E.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Potential ratio V0/E.
    #[arg(long, conflicts_with = "sin_theta_c")]
    nu: Option<f64>,
    /// Sine of the critical angle; pair with --zone.
    #[arg(long)]
    sin_theta_c: Option<f64>,
    /// Side of nu = 1 for --sin-theta-c.
    #[arg(long, value_parser = parse_zone)]
    zone: Option<ZoneSide>,
    /// |I+|.
    #[arg(long)]
    i_plus: Option<f64>,
    /// |I-|.
    #[arg(long)]
    i_minus: Option<f64>,
    /// Relative phase of I+ and I- in radians.
    #[arg(long, allow_hyphen_values = true)]
    delta_omega: Option<f64>,
}

impl ParamArgs {
    fn raw(&self) -> RawConfig {
        RawConfig {
            mu: self.mu,
            nu: self.nu,
            sin_theta_c: self.sin_theta_c,
            zone_side: self.zone,
            i_plus_mag: self.i_plus,
            i_minus_mag: self.i_minus,
            delta_omega: self.delta_omega,
            theta_samples: None,
            theta_max: None,
        }
    }

    fn resolve(&self, samples: Option<usize>, theta_max: Option<f64>) -> Result<StepConfig, CliError> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                serde_json::from_str::<RawConfig>(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => RawConfig::default(),
        };
        let flags = RawConfig {
            theta_samples: samples,
            theta_max,
            ..self.raw()
        };
        Ok(base.merge(flags).resolve()?)
    }
}

fn parse_zone(s: &str) -> Result<ZoneSide, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("angle").required(true).args(["sin_theta", "theta"])))]
struct PointArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Incidence angle given by its sine.
    #[arg(long)]
    sin_theta: Option<f64>,
    /// Incidence angle in radians.
    #[arg(long)]
    theta: Option<f64>,
    /// Print JSON instead of the text report.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Number of sin(theta) samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Largest incidence angle in radians.
    #[arg(long)]
    theta_max: Option<f64>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct FiguresArgs {
    /// fig1..fig5, or all.
    #[arg(default_value = "all")]
    which: String,
    /// Output directory.
    #[arg(long, default_value = "figures")]
    out: PathBuf,
    /// Samples per curve.
    #[arg(long, default_value_t = 400)]
    samples: usize,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Incidence angles per curve (at least 10).
    #[arg(long, default_value_t = 200)]
    grid_density: usize,
    /// Seed of the random-sample checks.
    #[arg(long, default_value_t = SuiteOptions::default().seed)]
    seed: u64,
    /// Number of random samples.
    #[arg(long, default_value_t = 1000)]
    random_points: usize,
    /// Negative control: flip the flux sign in the conservation check.
    #[arg(long)]
    corrupt_flux_sign: bool,
    /// Also run the slope-discontinuity check at the critical angle.
    #[arg(long)]
    include_slope_check: bool,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

fn set_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // a second initialisation in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct PointReport<'a> {
    config: &'a StepConfig,
    nu: f64,
    sin2_theta_c: f64,
    sin_theta: f64,
    conservation_residual: f64,
    r2_total: f64,
    t2_flux: f64,
    incident_plus: Complex64,
    incident_minus: Complex64,
    #[serde(flatten)]
    observables: &'a PointObservables,
    /// Entropies at the two closed-form extremal angles, when they apply.
    extremal_entropies: Option<[f64; 2]>,
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.12e} {:+.12e}i", z.re, z.im)
}

fn fmt_report(name: &str, r: &Option<EntanglementReport>) -> String {
    match r {
        Some(r) => format!(
            "{name:<12} S={:.12}  lambda=({:.12}, {:.12})  <gamma5>={:+.12}  p_odd={:.12} p_even={:.12} <P>={:+.12}\n",
            r.entropy,
            r.spectrum.lambda_plus,
            r.spectrum.lambda_minus,
            r.chirality,
            r.p_odd,
            r.p_even,
            r.avg_parity
        ),
        None => format!("{name:<12} undefined\n"),
    }
}

fn cmd_point(args: &PointArgs) -> Result<(), CliError> {
    let config = args.params.resolve(None, None)?;
    let theta = match (args.sin_theta, args.theta) {
        (Some(s), None) => IncidenceAngle::from_sine(s)?,
        (None, Some(t)) => IncidenceAngle::new(t)?,
        _ => unreachable!("clap enforces exactly one angle"),
    };
    let medium = config.medium()?;
    let inc = config.incident()?;
    let obs = evaluate_point(&medium, theta, &inc)?;
    let extremal = extremal_points(medium.mu(), &inc).ok().map(|[a, b]| {
        [
            crate::entanglement::von_neumann_entropy(&a.spectrum),
            crate::entanglement::von_neumann_entropy(&b.spectrum),
        ]
    });
    let report = PointReport {
        config: &config,
        nu: medium.nu(),
        sin2_theta_c: medium.sin2_critical(),
        sin_theta: theta.sin(),
        conservation_residual: obs.solution.conservation_residual(),
        r2_total: obs.r2_total(),
        t2_flux: obs.t2_flux(),
        incident_plus: inc.plus(),
        incident_minus: inc.minus(),
        observables: &obs,
        extremal_entropies: extremal,
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Usage(format!("cannot encode report: {e}")))?;
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{json}\n")).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    if args.json {
        emit(&format!("{json}\n"))?;
        return Ok(());
    }
    let amps = obs.solution.amplitudes;
    let a = obs.solution.a;
    let mut s = String::new();
    writeln!(s, "zone         {}", obs.zone()).unwrap();
    writeln!(s, "mu           {}", medium.mu()).unwrap();
    writeln!(s, "nu           {:.15}", medium.nu()).unwrap();
    writeln!(s, "sin^2 th_c   {:.15}", medium.sin2_critical()).unwrap();
    writeln!(s, "sin theta    {:.15}", theta.sin()).unwrap();
    writeln!(s, "A            {}", fmt_c(a.value())).unwrap();
    writeln!(s, "R+           {}", fmt_c(amps.r_plus)).unwrap();
    writeln!(s, "R-           {}", fmt_c(amps.r_minus)).unwrap();
    writeln!(s, "T+           {}", fmt_c(amps.t_plus)).unwrap();
    writeln!(s, "T-           {}", fmt_c(amps.t_minus)).unwrap();
    writeln!(s, "|R|^2        {:.15e}", obs.r2_total()).unwrap();
    writeln!(s, "flux |T|^2   {:.15e}", obs.t2_flux()).unwrap();
    writeln!(s, "v_qx/v_px    {:.15e}", obs.solution.flux_ratio).unwrap();
    writeln!(s, "residual     {:.3e}", obs.solution.conservation_residual()).unwrap();
    s.push_str(&fmt_report("incident", &Some(obs.incident)));
    s.push_str(&fmt_report("reflected", &obs.reflected));
    s.push_str(&fmt_report("transmitted", &obs.transmitted));
    if let Some([first, second]) = extremal {
        writeln!(s, "S_R extrema  {first:.12} (sin theta = 0), {second:.12} (sin theta = mu/sqrt(1+mu^2))").unwrap();
    }
    emit(&s)
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    set_threads(args.threads)?;
    let config = args.params.resolve(args.samples, args.theta_max)?;
    let grid = config.theta_grid()?;
    let scan = entropy_scan(&config, &grid)?;
    for p in &scan {
        if let Err(e) = &p.outcome {
            eprintln!("warning: sin_theta={} skipped: {e}", p.theta.sin());
        }
    }
    let rows: Vec<SweepRow> = scan.iter().map(SweepRow::from_scan).collect();
    let csv = to_csv(&rows);
    match &args.out {
        Some(path) => std::fs::write(path, csv).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            emit(&csv)
        }
    }
}

fn cmd_figures(args: &FiguresArgs) -> Result<(), CliError> {
    set_threads(args.threads)?;
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let which: Vec<Figure> = if args.which == "all" {
        Figure::ALL.to_vec()
    } else {
        vec![args.which.parse().map_err(CliError::Usage)?]
    };
    for fig in which {
        for path in figures::generate(fig, &args.out, args.samples)? {
            emit(&format!("{}\n", path.display()))?;
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    set_threads(args.threads)?;
    if args.grid_density < 10 {
        return Err(CliError::Usage(format!(
            "--grid-density must be at least 10, got {}",
            args.grid_density
        )));
    }
    let opts = SuiteOptions {
        grid_density: args.grid_density,
        random_points: args.random_points,
        seed: args.seed,
        corrupt_flux_sign: args.corrupt_flux_sign,
    };
    let results = run_suite(&opts, args.include_slope_check);
    for r in &results {
        emit(&format!("{r}\n"))?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Verification { failed });
    }
    emit(&format!("all {} checks passed\n", results.len()))?;
    Ok(())
}

/// Writes to stdout; a closed pipe (`| head`) ends output quietly.
fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Point(a) => cmd_point(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figures(a) => cmd_figures(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
