//! `massey`: structure validation, cohomology, brackets, Massey products
//! and deformations from JSON files.

mod commands;
mod error;
mod query;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use massey_core::massey::SearchOptions;

use crate::error::{exit, CliError, Result};
use crate::report::Report;

#[derive(Parser)]
#[command(name = "massey", version, about = "Exact Massey products and Lie algebra deformations")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    output: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Greedy,
    Backtrack,
}

#[derive(Args)]
struct SearchArgs {
    /// Greedy takes the canonical solution at every stage; backtrack also
    /// tries cocycle offsets.
    #[arg(long, value_enum, default_value_t = Mode::Greedy)]
    mode: Mode,

    /// Offsets tried per stage in backtrack mode.
    #[arg(long)]
    budget: Option<usize>,
}

impl SearchArgs {
    fn options(&self) -> Result<SearchOptions> {
        match (self.mode, self.budget) {
            (Mode::Greedy, None) => Ok(SearchOptions::default()),
            (Mode::Greedy, Some(_)) => Err(CliError::Usage("--budget needs --mode backtrack".into())),
            (Mode::Backtrack, b) => Ok(SearchOptions::backtrack(b.unwrap_or(SearchOptions::default().budget))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a structure file.
    Validate { file: PathBuf },
    /// H^q of a Lie algebra (with adjoint coefficients), DGLA or DGCA.
    Cohomology {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
    },
    /// Bracket of two cochains of a Lie algebra.
    Bracket {
        file: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Massey F-product in a DGLA.
    MasseyDgla {
        query: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Integrate an infinitesimal deformation over a local base.
    Integrate {
        query: PathBuf,
        /// Truncation order of a built-in base.
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Massey product in a DGCA.
    MasseyDgca {
        query: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Matric Massey product in a DGCA.
    Matric {
        query: PathBuf,
        /// Block sizes p1,p2,...
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Validate { file } => commands::validate(file),
        Command::Cohomology { file, degree } => commands::cohomology(file, *degree),
        Command::Bracket { file, left, right } => commands::bracket(file, left, right),
        Command::MasseyDgla { query, search } => commands::massey_dgla(query, &search.options()?),
        Command::Integrate { query, order, search } => commands::integrate(query, *order, &search.options()?),
        Command::MasseyDgca { query, search } => commands::massey_dgca(query, &search.options()?),
        Command::Matric { query, blocks, search } => commands::matric(query, blocks, &search.options()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.output {
                Format::Json => print!("{}", report.json()),
                Format::Text => print!("{}", report.text()),
            }
            ExitCode::from(report.exit as u8)
        }
        Err(e) => {
            eprintln!("massey: error[{}]: {e}", e.label());
            ExitCode::from(e.code() as u8)
        }
    }
}
