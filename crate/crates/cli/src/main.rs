mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Polyvector parallelograms of Fano threefolds.
#[derive(Parser, Debug)]
#[command(name = "hkr", version)]
struct Cli {
    /// Dataset file; defaults to the bundled dataset.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Optional TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Auto,
    Toric,
    Homogeneous,
    Special,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the parallelogram of one family, e.g. `2-8`.
    Compute {
        family: String,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineChoice,
        /// Include intermediate vectors.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check every modelled family against its expected row.
    VerifyAll {
        /// Restrict to one Picard rank.
        #[arg(long)]
        only: Option<u32>,
        /// Worker threads (1 = serial).
        #[arg(long)]
        parallel: Option<usize>,
        /// Write a JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run every model of a family, not only the preferred one.
        #[arg(long)]
        all_models: bool,
    },
    /// Cohomology of a homogeneous bundle, e.g. `bwb "Gr(2,4)xP(3)" cotangent`.
    Bwb { factors: String, bundle: String },
    /// Cohomology of a torus-invariant divisor on a fan file, e.g. `toric p2.fan 1,1,1`.
    Toric {
        fan: PathBuf,
        /// Comma-separated coefficients, one per ray.
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        /// Twist the cotangent sheaf instead of the structure sheaf.
        #[arg(long)]
        cotangent: bool,
    },
    /// Summarize which families carry models.
    Coverage,
    /// Print the dataset in normalized form.
    ExportData,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match config::Settings::resolve(cli.data.as_deref(), cli.config.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let code = match cli.command {
        Command::Compute { family, engine, trace, json } => commands::compute(&settings, &family, engine, trace, json),
        Command::VerifyAll { only, parallel, report, all_models } => {
            let threads = parallel.or(settings.parallel).unwrap_or(1);
            commands::verify_all(&settings, only, threads, report.as_deref(), all_models)
        }
        Command::Bwb { factors, bundle } => commands::bwb(&factors, &bundle),
        Command::Toric { fan, coeffs, cotangent } => commands::toric(&fan, &coeffs, cotangent),
        Command::Coverage => commands::coverage(&settings),
        Command::ExportData => commands::export_data(&settings),
    };
    ExitCode::from(code)
}
