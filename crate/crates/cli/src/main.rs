//! `stratcat`: batch front end for the stratcat library.
//!
//! Every input yields one JSON report line. Exit codes: 0 success, 1 a
//! theorem check failed, 2 usage error, 3 malformed input, 4 feasibility cap.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stratcat::formula::Dialect;

mod cat;
mod formulas;
mod model;
mod report;

use report::{exit_code, render, run, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "stratcat", version, about = "Stratification, relativization and finite category checks")]
struct Cli {
    /// Formula language: plain, tst or lstar.
    #[arg(long, global = true, default_value = "plain")]
    dialect: Dialect,
    /// Human-readable output instead of JSON lines.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads; reports keep input order.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed for `--random` corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

/// Where formulas come from.
#[derive(Args, Clone)]
pub struct FormulaInput {
    /// Formula files: one formula per line, `#` comments.
    pub files: Vec<PathBuf>,
    /// Formulas may span lines and are separated by `;`.
    #[arg(long)]
    pub multi: bool,
    /// Generate this many random plain formulas from `--seed` instead.
    #[arg(long, value_name = "COUNT")]
    pub random: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and print formulas.
    Parse {
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Decide stratification.
    Stratify {
        #[command(flatten)]
        input: FormulaInput,
        /// Merge all occurrences of an L* set variable.
        #[arg(long)]
        merge_set_vars: bool,
        /// Also run the exhaustive oracle and report agreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Formula transformations and axiom-schema instances.
    #[command(subcommand)]
    Transform(formulas::TransformVerb),
    /// Hereditarily finite sets and finite structures.
    #[command(subcommand)]
    Model(model::ModelVerb),
    /// Finite categories, Rel and Set constructions.
    #[command(subcommand)]
    Cat(cat::CatVerb),
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Parse { .. } => "parse".into(),
            Command::Stratify { .. } => "stratify".into(),
            Command::Transform(v) => format!("transform {}", v.name()),
            Command::Model(v) => format!("model {}", v.name()),
            Command::Cat(v) => format!("cat {}", v.name()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let name = cli.command.name();
    let jobs = match cli.command {
        Command::Parse { input } => formulas::parse_jobs(&input, cli.dialect, cli.seed),
        Command::Stratify { input, merge_set_vars, oracle } => {
            formulas::stratify_jobs(&input, cli.dialect, cli.seed, merge_set_vars, oracle)
        }
        Command::Transform(verb) => formulas::transform_jobs(verb, cli.dialect, cli.seed),
        Command::Model(verb) => model::jobs(verb, cli.dialect),
        Command::Cat(verb) => cat::jobs(verb),
    };
    let records = run(&name, jobs, cli.jobs.max(1));
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for r in &records {
        let _ = writeln!(out, "{}", render(r, cli.pretty));
    }
    ExitCode::from(exit_code(&records))
}
