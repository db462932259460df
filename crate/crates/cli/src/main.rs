//! `cdkit` — counterdiabatic-driving speed and cost toolkit.
//!
//! Subcommands: `report` (per-grid protocol dataset plus summary),
//! `qsl-sweep` (QSL time against protocol duration), `validate`
//! (oracle-equivalence and fidelity self-checks) and `version`.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error,
//! 3 numeric error.

mod checks;
mod config;
mod error;
mod output;
mod schedule_file;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use config::{Model, OutputFormat, RunConfig};
use error::CliError;
use output::SweepRow;

#[derive(Parser)]
#[command(name = "cdkit", version, about = "Counterdiabatic driving: QSL speeds, times and costs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a protocol on a uniform grid and write the dataset.
    Report(RunArgs),
    /// Compute the QSL time for each duration in a list.
    QslSweep(SweepArgs),
    /// Run the oracle-equivalence and propagator fidelity suites.
    Validate(ValidateArgs),
    /// Print the toolkit version.
    Version,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Config file: JSON (a previous JSON report re-ingests) or flat
    /// `key = value` lines.
    #[arg(long)]
    config: Option<String>,

    /// Model to evaluate.
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,

    #[arg(long = "oscillator.omega0", value_name = "W0")]
    oscillator_omega0: Option<f64>,
    #[arg(long = "oscillator.omega_d", value_name = "WD")]
    oscillator_omega_d: Option<f64>,
    #[arg(long = "oscillator.mass", value_name = "M")]
    oscillator_mass: Option<f64>,
    #[arg(long = "oscillator.tau", value_name = "TAU")]
    oscillator_tau: Option<f64>,

    #[arg(long = "lz.delta", value_name = "DELTA")]
    lz_delta: Option<f64>,
    #[arg(long = "lz.g0", value_name = "G0")]
    lz_g0: Option<f64>,
    #[arg(long = "lz.g_d", value_name = "GD")]
    lz_g_d: Option<f64>,
    #[arg(long = "lz.tau", value_name = "TAU")]
    lz_tau: Option<f64>,
    #[arg(long = "lz.rescaled", value_name = "BOOL")]
    lz_rescaled: Option<bool>,

    /// Sampled-schedule JSON for the generic-file model.
    #[arg(long = "schedule.file", value_name = "PATH")]
    schedule_file: Option<String>,

    /// Number of grid samples over [0, tau].
    #[arg(long = "grid-points", value_name = "N")]
    grid_points: Option<usize>,
    /// Absolute quadrature tolerance.
    #[arg(long = "abs-tol", value_name = "TOL")]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long = "rel-tol", value_name = "TOL")]
    rel_tol: Option<f64>,

    /// Output format (csv or json).
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,

    /// Ascending comma-separated protocol durations, e.g. `0.5,1,2`.
    #[arg(long = "tau-list", value_name = "LIST")]
    tau_list: String,
}

#[derive(Args)]
struct ValidateArgs {
    /// Override the finite-difference step factor used by the checks.
    #[arg(long = "fd-step", value_name = "FACTOR")]
    fd_step: Option<f64>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    match s {
        "oscillator" => Ok(Model::Oscillator),
        "landau-zener" => Ok(Model::LandauZener),
        "generic-file" => Ok(Model::GenericFile),
        _ => Err(format!(
            "`{s}` is not one of oscillator, landau-zener, generic-file"
        )),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(format!("`{s}` is not one of csv, json")),
    }
}

impl RunArgs {
    /// Config file first, then flag overrides.
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = m;
        }
        if let Some(v) = self.oscillator_omega0 {
            cfg.oscillator.omega0 = v;
        }
        if let Some(v) = self.oscillator_omega_d {
            cfg.oscillator.omega_d = v;
        }
        if let Some(v) = self.oscillator_mass {
            cfg.oscillator.mass = v;
        }
        if let Some(v) = self.oscillator_tau {
            cfg.oscillator.tau = v;
        }
        if let Some(v) = self.lz_delta {
            cfg.lz.delta = v;
        }
        if let Some(v) = self.lz_g0 {
            cfg.lz.g0 = v;
        }
        if let Some(v) = self.lz_g_d {
            cfg.lz.g_d = v;
        }
        if let Some(v) = self.lz_tau {
            cfg.lz.tau = v;
        }
        if let Some(v) = self.lz_rescaled {
            cfg.lz.rescaled = v;
        }
        if let Some(v) = &self.schedule_file {
            cfg.schedule_file = Some(v.clone());
        }
        if let Some(v) = self.grid_points {
            cfg.grid_points = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = &self.output {
            cfg.output = Some(v.clone());
        }
        Ok(cfg)
    }
}

fn cmd_report(args: &RunArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let protocol = cfg.build_protocol()?;
    let report = cdkit_core::qsl::protocol_report(
        protocol.as_ref(),
        cfg.grid_points,
        cfg.abs_tol,
        cfg.rel_tol,
    )?;
    let text = match cfg.format {
        OutputFormat::Csv => output::report_csv(&report, &cfg),
        OutputFormat::Json => output::report_json(&report, &cfg)?,
    };
    output::emit(&text, cfg.output.as_deref())
}

fn parse_tau_list(list: &str) -> Result<Vec<f64>, CliError> {
    let taus: Vec<f64> = list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("tau-list: cannot parse `{}`", s.trim())))
        })
        .collect::<Result<_, _>>()?;
    if taus.is_empty() {
        return Err(CliError::usage("tau-list: must be nonempty"));
    }
    if taus.iter().any(|t| !(*t > 0.0)) {
        return Err(CliError::usage("tau-list: durations must be > 0"));
    }
    if taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::usage("tau-list: durations must be ascending"));
    }
    Ok(taus)
}

fn cmd_qsl_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let cfg = args.run.resolve()?;
    cfg.validate()?;
    let taus = parse_tau_list(&args.tau_list)?;

    // durations are independent; rows come back in input order
    let rows: Vec<SweepRow> = taus
        .par_iter()
        .map(|&tau| -> Result<SweepRow, CliError> {
            let protocol = cfg.build_protocol_with_tau(tau)?;
            Ok(SweepRow {
                tau,
                total_cost: cdkit_core::qsl::total_cost(
                    protocol.as_ref(),
                    cfg.abs_tol,
                    cfg.rel_tol,
                )?,
                e_tau: cdkit_core::qsl::time_averaged_energy(
                    protocol.as_ref(),
                    cfg.abs_tol,
                    cfg.rel_tol,
                )?,
                tau_qsl: cdkit_core::qsl::qsl_time(protocol.as_ref(), cfg.abs_tol, cfg.rel_tol)?,
            })
        })
        .collect::<Result<_, _>>()?;

    let text = match cfg.format {
        OutputFormat::Csv => output::sweep_csv(&rows, &cfg),
        OutputFormat::Json => output::sweep_json(&rows, &cfg)?,
    };
    output::emit(&text, cfg.output.as_deref())
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    if let Some(f) = args.fd_step {
        if !(f > 0.0 && f < 0.5) {
            return Err(CliError::usage(format!(
                "fd-step: factor must be in (0, 0.5), got {f}"
            )));
        }
    }
    let checks = checks::run_all(args.fd_step);
    let mut failures = 0usize;
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {}: achieved {:.3e} (required <= {:.3e}) — {}",
            c.name, c.achieved, c.required, c.detail
        );
        if !c.pass {
            failures += 1;
        }
    }
    if failures > 0 {
        return Err(CliError::Validation(format!(
            "{failures} of {} checks failed",
            checks.len()
        )));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Report(args) => cmd_report(args),
        Command::QslSweep(args) => cmd_qsl_sweep(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Version => {
            println!("cdkit {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    match result {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            std::process::ExitCode::from(e.exit_code() as u8)
        }
    }
}
