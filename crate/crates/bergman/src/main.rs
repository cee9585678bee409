use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bergman::cli;

/// Numerical experiments on the integral characterizations of weighted
/// Bergman spaces on the unit ball.
#[derive(Parser)]
#[command(name = "bergman", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Comparability report for the four derivative functionals.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Compare output against recorded goldens instead of recording.
        #[arg(long)]
        verify: bool,
    },
    /// Truncation profiles of the extremal example over a q-grid.
    Sharpness {
        #[arg(long)]
        config: PathBuf,
    },
    /// Built-in checks for the supporting lemmas.
    LemmaChecks {
        /// Run every lemma check.
        #[arg(long, conflicts_with = "lemma")]
        all: bool,
        /// Run one lemma's checks (3..10).
        #[arg(long)]
        lemma: Option<u32>,
    },
    /// Operator boundedness verdicts over a parameter grid file.
    OperatorProbe {
        #[arg(long)]
        grid: PathBuf,
    },
    /// One integrand across the quadrature methods.
    QuadratureBench {
        #[arg(long)]
        integrand: String,
        #[arg(long, default_value = "all")]
        methods: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compare {
            config,
            seed,
            verify,
        } => cli::run_compare(&config, seed, verify),
        Command::Sharpness { config } => cli::run_sharpness(&config),
        Command::LemmaChecks { all, lemma } => {
            let lemmas: Vec<u32> = if all {
                (3..=10).collect()
            } else {
                match lemma {
                    Some(l) => vec![l],
                    None => {
                        eprintln!("lemma-checks needs --all or --lemma <3..10>");
                        return ExitCode::from(cli::EXIT_CONFIG as u8);
                    }
                }
            };
            cli::run_lemma_checks(&lemmas)
        }
        Command::OperatorProbe { grid } => cli::run_operator_probe(&grid),
        Command::QuadratureBench { integrand, methods } => {
            cli::run_quadrature_bench(&integrand, &methods)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli::exit_code_for(&err) as u8)
        }
    }
}
