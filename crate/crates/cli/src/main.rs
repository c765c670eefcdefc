//! `numrange`: batch front end for numerical range and attainment computations.

mod commands;
mod json;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "numrange", version, about = "Numerical range, attainment sets and their characterizations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Operator JSON file.
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Ambient norm: l2, l1, linf, or a JSON descriptor such as {"variant":"lp","p":4}.
    #[arg(long, global = true, default_value = "l2", value_name = "SPEC")]
    pub space: String,
    /// Scalar field; overrides the field recorded in the input.
    #[arg(long, global = true, value_parser = ["real", "complex"])]
    pub field: Option<String>,
    /// Number of directions in the support-function sweep.
    #[arg(long, global = true, default_value_t = 720, value_name = "N")]
    pub resolution: usize,
    /// Seed of the oracle sample cloud.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    pub seed: u64,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the boundary of the field of values (ℓ₂ only).
    Fov {
        /// Boundary CSV destination; defaults to the --out path with a .csv extension.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Attainment sets of ‖T‖, m(T), v(T) and c(T) with certificates.
    Attain,
    /// Check one characterization or intersection theorem.
    Verify {
        #[arg(long, value_name = "ID")]
        theorem: String,
        /// Unit vector JSON for the pointwise characterizations.
        #[arg(long, value_name = "PATH")]
        x: Option<PathBuf>,
    },
    /// Run the built-in examples and their checks.
    Gallery {
        #[arg(long, value_name = "NAME")]
        item: Option<String>,
        /// Scale the ℓ₁ example entries from 1/n to 1.1/n.
        #[arg(long)]
        perturb: bool,
    },
    /// Brute-force estimates from a seeded sample of the unit sphere.
    Oracle {
        #[arg(long, value_name = "N")]
        samples: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            let text = json::to_string(&outcome.report);
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text + "\n"),
                None => {
                    println!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(outcome.status.code())
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
