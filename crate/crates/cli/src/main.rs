//! Command-line front end: parse descriptor files, run classifications and
//! checks, emit reports as human-readable lines or JSON records.

mod commands;
mod input;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    JsonLines,
}

#[derive(Debug, Parser)]
#[command(
    name = "valdiff",
    about = "Classify prime-degree valued-field extensions, describe the differential \
             module of the valuation-ring extension, and check the deeply-ramified \
             conditions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the extensions in a descriptor file and report their
    /// differential modules.
    Classify {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Classify a tower of extensions step by step.
    ClassifyTower {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Decide the deeply-ramified conditions for a field descriptor; exit
    /// code 0/1/2 reports true/false/undecided.
    CheckDr {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Run the series oracle against the classifier on a relation batch.
    OracleVerify {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Overrides the seed in the input file.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for the batch; results keep input order.
        #[arg(long, default_value = "1")]
        jobs: usize,
    },
    /// Reproduce the built-in example suite and the distinguished
    /// generator table.
    Examples {
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Classify { input, format } => commands::classify(&input, format),
        Command::ClassifyTower { input, format } => commands::classify_tower(&input, format),
        Command::CheckDr { input, format } => commands::check_dr(&input, format),
        Command::OracleVerify {
            input,
            format,
            seed,
            jobs,
        } => commands::oracle_verify(&input, format, seed, jobs),
        Command::Examples { format } => commands::examples(format),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
