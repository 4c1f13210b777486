//! `thermopress`: pressure, equilibrium states, duality, and phase
//! transitions for subshifts of finite type, from JSON system files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;
mod report;
mod verify;

/// Exit codes: 0 success, 2 invalid input, 3 numerical failure,
/// 4 verification failure.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl From<thermopress_core::phase::PhaseError> for CliError {
    fn from(e: thermopress_core::phase::PhaseError) -> Self {
        use thermopress_core::phase::PhaseError;
        match e {
            PhaseError::Sft(inner) => CliError::Input(inner.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "thermopress",
    version,
    about = "Topological pressure, equilibrium states, Legendre-Fenchel duality, and phase transitions on subshifts of finite type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// JSON system file (alphabet, adjacency, named potentials)
    #[arg(long)]
    input: PathBuf,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for commands::OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => commands::OutputFormat::Csv,
            Format::Json => commands::OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = -5.0)]
    t_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 5.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1001)]
    steps: usize,
}

#[derive(Subcommand)]
enum Command {
    /// System summary: components, primitivity, entropies, potentials
    Info {
        #[command(flatten)]
        input: InputArg,
    },
    /// Sample t -> P(base + t * potential) to CSV (envelope on reducible systems)
    PressureCurve {
        #[command(flatten)]
        input: InputArg,
        /// direction potential (the family parameter multiplies it)
        #[arg(long)]
        potential: String,
        /// base potential name (zero when omitted)
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        range: RangeArgs,
        /// parallel workers for grid evaluation (output order is fixed)
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// output file (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Legendre conjugate, biconjugate recovery, and Fenchel-Young summary
    Duality {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        potential: String,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        range: RangeArgs,
        /// slope grid size
        #[arg(long, default_value_t = 1001)]
        a_steps: usize,
        /// also report the subdifferential interval at this t
        #[arg(long, allow_hyphen_values = true)]
        subdiff_at: Option<f64>,
        /// file for the conjugate CSV; the JSON summary always goes to stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Eigendata, equilibrium mean, Green-Kubo variance, FD cross-check
    Variance {
        #[command(flatten)]
        input: InputArg,
        /// family potential; the evaluation point is at * potential
        #[arg(long)]
        potential: String,
        /// family parameter
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        at: f64,
        /// observable direction
        #[arg(long)]
        direction: String,
        /// covariance-tail truncation tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// covariance lags to report
        #[arg(long, default_value_t = 32)]
        lags: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Corner report over the component envelope
    PhaseScan {
        #[command(flatten)]
        input: InputArg,
        /// direction potential for the one-parameter family
        #[arg(long)]
        potential: String,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        range: RangeArgs,
        /// corner detection threshold (relative slope-jump size)
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Definitional pressure via partition sums, CSV per n
    Partition {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        potential: String,
        /// largest word length n
        #[arg(long, default_value_t = 1000)]
        n_max: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the built-in invariant suite; exit 4 on any failure
    Verify,
    /// Golden-mean reference constants, computed live
    Summary,
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Info { input } => {
            let loaded = input::load(&input.input)?;
            commands::info(&loaded)?;
        }
        Command::PressureCurve {
            input,
            potential,
            base,
            range,
            jobs,
            format,
            output,
        } => {
            let loaded = input::load(&input.input)?;
            commands::pressure_curve(
                &loaded,
                &potential,
                base.as_deref(),
                range.t_min,
                range.t_max,
                range.steps,
                jobs,
                format.into(),
                output.as_deref(),
            )?;
        }
        Command::Duality {
            input,
            potential,
            base,
            range,
            a_steps,
            subdiff_at,
            output,
        } => {
            let loaded = input::load(&input.input)?;
            commands::duality(
                &loaded,
                &potential,
                base.as_deref(),
                range.t_min,
                range.t_max,
                range.steps,
                a_steps,
                subdiff_at,
                output.as_deref(),
            )?;
        }
        Command::Variance {
            input,
            potential,
            at,
            direction,
            tol,
            lags,
            output,
        } => {
            let loaded = input::load(&input.input)?;
            commands::variance(
                &loaded,
                &potential,
                at,
                &direction,
                tol,
                lags,
                output.as_deref(),
            )?;
        }
        Command::PhaseScan {
            input,
            potential,
            base,
            range,
            threshold,
            output,
        } => {
            let loaded = input::load(&input.input)?;
            commands::phase_scan(
                &loaded,
                &potential,
                base.as_deref(),
                range.t_min,
                range.t_max,
                range.steps,
                threshold,
                output.as_deref(),
            )?;
        }
        Command::Partition {
            input,
            potential,
            n_max,
            output,
        } => {
            let loaded = input::load(&input.input)?;
            commands::partition(&loaded, &potential, n_max, output.as_deref())?;
        }
        Command::Verify => {
            let failed = verify::run();
            if failed > 0 {
                return Ok(ExitCode::from(4));
            }
        }
        Command::Summary => commands::summary()?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
