//! Command-line driver: run a configured row-sequence experiment, dump its
//! expansion coefficients, or just validate a config.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pade_ortho::expansion::Rho0Estimate;
use pade_ortho::experiment::{emit, run_experiment, ExperimentConfig, PreparedExperiment};

#[derive(Parser)]
#[command(
    name = "pade-ortho",
    version,
    about = "Row sequences of Pade-orthogonal approximants: pole detection and rate checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment and write report.csv, summary.json, metadata.txt.
    ///
    /// Exit code: 0 when all verdicts pass, 2 on any failure, 3 when the
    /// data is insufficient to decide.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the expansion coefficients as "n re im" lines.
    Coeffs {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate the config and exit.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let bundle = run_experiment(&cfg)?;
            emit(&bundle, &out)?;
            print_summary(&bundle);
            println!("wrote {}", out.display());
            Ok(ExitCode::from(bundle.verdicts.exit_code() as u8))
        }
        Command::Coeffs { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let prepared = PreparedExperiment::from_config(&cfg)?;
            std::fs::write(&out, prepared.coefficients.to_text())?;
            println!(
                "wrote {} coefficients to {}",
                prepared.coefficients.len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { config } => {
            ExperimentConfig::load(&config)?;
            println!("config ok: {}", config.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_summary(bundle: &pade_ortho::experiment::ReportBundle) {
    let s = &bundle.summary;
    println!(
        "m = {}, n in [{}, {}], {} rows ({} unique)",
        s.m, s.n_start, s.n_stop, s.rows_total, s.rows_unique
    );
    match (s.fitted_delta, s.predicted_delta) {
        (Some(fit), Some(pred)) => println!("delta: fitted {fit:.7}, predicted {pred:.7}"),
        (Some(fit), None) => println!("delta: fitted {fit:.7}"),
        _ => println!("delta: no geometric convergence detected"),
    }
    match s.rho0_estimate {
        Some(Rho0Estimate::Finite { rho, .. }) => println!("rho_0 estimate: {rho:.7}"),
        Some(Rho0Estimate::Entire) => println!("rho_0 estimate: entire"),
        None => {}
    }
    if let Some(rho) = s.rho_m_minus_1_estimate {
        println!("rho_(m-1) estimate: {rho:.7}");
    }
    if let Some(rho) = s.rho_m_estimate {
        println!("rho_m estimate: {rho:.7}");
    }
    for (i, p) in s.trajectory_limits.iter().enumerate() {
        println!("pole limit {}: {:.10} + {:.10}i", i + 1, p.re, p.im);
    }
    println!("verdict: {:?}", s.verdicts.overall);
}
