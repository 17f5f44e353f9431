//! `cfreduce`: batch front end for conflict graphs, MaxIS solvers and the
//! phase-based conflict-free multicoloring.
//!
//! Exit codes: 0 success, 1 verification failed, 2 bad input, 3 promise
//! violation (edges left after the phase budget), 4 exact-solver cap exceeded.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cfreduce_core::Error;

#[derive(Debug, Parser)]
#[command(name = "cfreduce", version, about = "Conflict-free multicoloring via MaxIS approximation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the conflict graph G_k of a hypergraph and export it as DIMACS
    /// plus a triple map.
    Build {
        hypergraph: PathBuf,
        #[arg(long)]
        k: u32,
        /// Output prefix; writes PREFIX.dimacs, PREFIX.triples.json and
        /// PREFIX.manifest.json.
        #[arg(long)]
        out: String,
    },
    /// Conflict-free multicolor a hypergraph, one fresh palette per phase.
    Color {
        hypergraph: PathBuf,
        #[arg(long)]
        k: u32,
        /// Approximation factor the solver is promised to meet.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value = "exact")]
        solver: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cap: Option<usize>,
        /// Override the phase budget ⌈λ·ln m⌉ + 1.
        #[arg(long)]
        max_phases: Option<usize>,
        /// Drop edges happy under all palettes so far, not just the current one.
        #[arg(long)]
        aggressive: bool,
        /// Record wall-clock times in the phase log.
        #[arg(long)]
        timings: bool,
        /// Output prefix; writes PREFIX.col.json, PREFIX.phases.jsonl and
        /// PREFIX.manifest.json.
        #[arg(long)]
        out: String,
    },
    /// Solve MaxIS on a DIMACS graph.
    Solve {
        graph: PathBuf,
        #[arg(long, default_value = "exact")]
        solver: String,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also run the exact oracle and report α and the ratio α/|output|.
        #[arg(long)]
        measure: bool,
        #[arg(long)]
        timings: bool,
        /// Output prefix; writes PREFIX.is.json, PREFIX.report.jsonl and
        /// PREFIX.manifest.json.
        #[arg(long)]
        out: String,
    },
    /// Check that a coloring or multicoloring file is conflict-free.
    Verify { hypergraph: PathBuf, coloring: PathBuf },
    /// Generate a planted almost-uniform instance with a conflict-free coloring.
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output prefix; writes PREFIX.hg, PREFIX.col.json and PREFIX.manifest.json.
        #[arg(long)]
        out: String,
    },
    /// Run the locality-1 SLOCAL MIS rule on a DIMACS graph.
    Slocal {
        graph: PathBuf,
        /// `identity`, `random`, or a comma-separated list of 1-based vertices.
        #[arg(long, default_value = "identity")]
        order: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write membership JSON here instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Measure a solver against the exact oracle over planted instances.
    Bench {
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "greedy")]
        solver: String,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        timings: bool,
        /// Write reports here instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug)]
pub enum Failure {
    /// Verification returned false.
    Rejected(String),
    /// Edges survived the phase budget.
    PromiseViolation(String),
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::PromiseViolation(msg)) => {
            eprintln!("promise violation: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e @ Error::SizeLimit { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
