use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use unruh_cli::hawking::{hawking_temperature, HawkingQuery};
use unruh_cli::maxfind::find_max;
use unruh_cli::protocol::{load_config, report_to_json, run_protocol, ProtocolConfig};
use unruh_cli::sweep::{
    metadata_json, sweep, to_csv, Axis, AxisRange, FixedParams, Model, OutputScale, SweepSpec,
};
use unruh_cli::validate::run_validation;

/// Fisher information of the Unruh temperature for accelerated detectors:
/// parameter sweeps, peak finding, estimation-protocol simulation and
/// Hawking-temperature conversion. Accelerations and temperatures are in
/// units of the detector gap omega, Fisher information in omega^{-2}.
#[derive(Parser)]
#[command(name = "unruh", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// Detector model.
    #[arg(long, value_enum, default_value = "single")]
    model: Model,

    /// Detector energy gap (sets the units).
    #[arg(long, default_value_t = 1.0)]
    omega: f64,

    /// Proper acceleration, in units of omega.
    #[arg(long, default_value_t = 1.0)]
    acceleration: f64,

    /// Effective coupling.
    #[arg(long, default_value_t = 0.01)]
    mu: f64,

    /// Initial-state angle of the single detector (sin eta |0> + cos eta |1>).
    #[arg(long, default_value_t = FRAC_PI_2)]
    eta: f64,

    /// Initial-entanglement angle of the detector pair
    /// (sin theta |01> + cos theta |10>).
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
}

impl ModelArgs {
    fn fixed(&self) -> FixedParams {
        FixedParams {
            omega: self.omega,
            acceleration: self.acceleration,
            mu: self.mu,
            eta: self.eta,
            theta: self.theta,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter axis and emit a CSV table plus JSON metadata.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,

        /// Axis to sweep.
        #[arg(long, value_enum, default_value = "acceleration")]
        axis: Axis,

        /// Lower end of the axis range.
        #[arg(long = "a-min")]
        a_min: Option<f64>,

        /// Upper end of the axis range.
        #[arg(long = "a-max")]
        a_max: Option<f64>,

        /// Number of grid points.
        #[arg(long, default_value_t = 200)]
        points: usize,

        /// Scale of the Fisher columns.
        #[arg(long, value_enum, default_value = "natural")]
        scale: OutputScale,

        /// Output CSV path (metadata goes to the same name with a
        /// .meta.json suffix). Defaults to sweep.csv in the output
        /// directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Locate the acceleration maximizing the Fisher information.
    Max {
        #[command(flatten)]
        model: ModelArgs,

        /// Lower end of the acceleration domain.
        #[arg(long = "a-min", default_value_t = 0.01)]
        a_min: f64,

        /// Upper end of the acceleration domain.
        #[arg(long = "a-max", default_value_t = 20.0)]
        a_max: f64,

        /// Optional JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Simulate the optimal estimation protocol and print the report.
    Protocol {
        /// JSON parameter file; command-line flags are ignored when given.
        #[arg(long)]
        params: Option<PathBuf>,

        #[command(flatten)]
        model: ModelArgs,

        /// Number of measurement shots.
        #[arg(long, default_value_t = 100_000)]
        shots: u64,

        /// Random seed (identical seeds give byte-identical reports).
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Optional file to write the JSON report to (it is always printed).
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Convert black-hole quantities to Hawking temperatures.
    Hawking {
        /// Schwarzschild mass in geometric units (kappa = 1/4m).
        #[arg(long)]
        mass: Option<f64>,

        /// Surface gravity kappa (T = kappa / 2 pi).
        #[arg(long = "kappa-gravity")]
        kappa_gravity: Option<f64>,

        /// Killing-field norm at the first radius.
        #[arg(long, requires = "chi2")]
        chi1: Option<f64>,

        /// Killing-field norm at the second radius.
        #[arg(long, requires = "chi1")]
        chi2: Option<f64>,
    },

    /// Run the closed-form-vs-oracle validation suite.
    Validate,
}

/// Exit status 2 for argument/input errors, 1 for failed computations or
/// failed validation.
enum CliError {
    Usage(anyhow::Error),
    Run(anyhow::Error),
    ValidationFailed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) | CliError::ValidationFailed => 1,
        }
    }
}

fn out_dir() -> PathBuf {
    std::env::var_os("UNRUH_OUT_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn resolve_out(flag: Option<PathBuf>, default_name: &str) -> PathBuf {
    flag.unwrap_or_else(|| out_dir().join(default_name))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Run(anyhow::anyhow!("creating {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::Run(anyhow::anyhow!("writing {}: {e}", path.display())))
}

fn default_axis_range(axis: Axis) -> (f64, f64) {
    match axis {
        Axis::Acceleration => (0.1, 20.0),
        Axis::Eta | Axis::Theta => (0.0, FRAC_PI_2),
        Axis::Mu => (0.001, 0.1),
    }
}

fn cmd_sweep(
    model: ModelArgs,
    axis: Axis,
    a_min: Option<f64>,
    a_max: Option<f64>,
    points: usize,
    scale: OutputScale,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let (def_min, def_max) = default_axis_range(axis);
    let spec = SweepSpec {
        model: model.model,
        axis,
        range: AxisRange { min: a_min.unwrap_or(def_min), max: a_max.unwrap_or(def_max), points },
        fixed: model.fixed(),
        scale,
    };
    spec.validate().map_err(CliError::Usage)?;
    let table = sweep(&spec).map_err(CliError::Run)?;

    let csv_path = resolve_out(out, "sweep.csv");
    write_file(&csv_path, &to_csv(&table, axis))?;
    let meta_path = csv_path.with_extension("meta.json");
    let meta = serde_json::to_string_pretty(&metadata_json(&spec, None)).expect("metadata");
    write_file(&meta_path, &format!("{meta}\n"))?;

    let flagged = table.rows.iter().filter(|r| r.values.is_none()).count();
    println!(
        "wrote {} rows to {} ({} flagged), metadata to {}",
        table.rows.len(),
        csv_path.display(),
        flagged,
        meta_path.display()
    );
    if spec.perturbative_warning() {
        eprintln!("warning: mu > 0.1 leaves the first-order validity region");
    }
    Ok(())
}

fn cmd_max(
    model: ModelArgs,
    a_min: f64,
    a_max: f64,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if model.mu > 0.1 {
        eprintln!("warning: mu > 0.1 leaves the first-order validity region");
    }
    let result = find_max(model.model, &model.fixed(), a_min, a_max).map_err(CliError::Run)?;
    if !result.rival_peaks.is_empty() {
        eprintln!(
            "warning: {} rival local maxima detected; all candidates reported",
            result.rival_peaks.len()
        );
    }
    let json = serde_json::to_string_pretty(&result.to_json()).expect("max result");
    println!("{json}");
    if let Some(path) = out {
        write_file(&path, &format!("{json}\n"))?;
    }
    Ok(())
}

fn cmd_protocol(
    params: Option<PathBuf>,
    model: ModelArgs,
    shots: u64,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let (detector, shots, seed) = match params {
        Some(path) => {
            let cfg = load_config(&path).map_err(CliError::Usage)?;
            let det = cfg.to_detector_params().map_err(CliError::Usage)?;
            (det, cfg.shots, cfg.seed)
        }
        None => {
            let cfg = ProtocolConfig {
                model: match model.model {
                    Model::Single => "single".into(),
                    Model::Two => "two".into(),
                },
                omega: model.omega,
                acceleration: model.acceleration,
                mu: model.mu,
                eta: Some(model.eta),
                theta: Some(model.theta),
                shots,
                seed,
            };
            (cfg.to_detector_params().map_err(CliError::Usage)?, shots, seed)
        }
    };
    if detector.perturbative_warning() {
        eprintln!("warning: mu > 0.1 leaves the first-order validity region");
    }
    let report = run_protocol(&detector, shots, seed).map_err(CliError::Run)?;
    let json = report_to_json(&report);
    print!("{json}");
    if let Some(path) = out {
        write_file(&path, &json)?;
    }
    Ok(())
}

fn cmd_hawking(
    mass: Option<f64>,
    kappa_gravity: Option<f64>,
    chi1: Option<f64>,
    chi2: Option<f64>,
) -> Result<(), CliError> {
    let chi = match (chi1, chi2) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    let query = HawkingQuery::new(mass, kappa_gravity, chi).map_err(CliError::Usage)?;
    let answer = hawking_temperature(&query);
    println!("{}", serde_json::to_string_pretty(&answer).expect("answer"));
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep { model, axis, a_min, a_max, points, scale, out } => {
            cmd_sweep(model, axis, a_min, a_max, points, scale, out)
        }
        Command::Max { model, a_min, a_max, out } => cmd_max(model, a_min, a_max, out),
        Command::Protocol { params, model, shots, seed, out } => {
            cmd_protocol(params, model, shots, seed, out)
        }
        Command::Hawking { mass, kappa_gravity, chi1, chi2 } => {
            cmd_hawking(mass, kappa_gravity, chi1, chi2)
        }
        Command::Validate => {
            let results = run_validation();
            let failed = results.iter().filter(|c| !c.passed).count();
            if failed == 0 {
                println!("all {} checks passed", results.len());
                Ok(())
            } else {
                eprintln!("{failed} of {} checks failed", results.len());
                Err(CliError::ValidationFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version, 2 for usage errors
            e.exit();
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(err) => eprintln!("error: {err:#}"),
                CliError::Run(err) => eprintln!("error: {err:#}"),
                CliError::ValidationFailed => {}
            }
            ExitCode::from(e.code())
        }
    }
}
