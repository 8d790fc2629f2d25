use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynchoice::rational::parse_rational;
use dynchoice::Rational;

#[derive(Parser, Debug)]
#[command(
    name = "dynchoice",
    version,
    about = "Exact checks and constructions for dynamic stochastic choice data"
)]
pub struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Worker threads for sweeps (default: all cores). Results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a dataset file.
    Validate { data: PathBuf },
    /// Run every applicable axiom check.
    Check {
        data: PathBuf,
        /// Require strict inequalities.
        #[arg(long)]
        strict: bool,
    },
    /// Build a representing measure and write it out.
    Construct {
        data: PathBuf,
        #[arg(short = 'o', long = "output", value_name = "MEASURE")]
        output: PathBuf,
    },
    /// Check that a measure represents a dataset.
    Verify {
        measure: PathBuf,
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Sample a measure, and optionally the dataset it induces.
    Generate {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        seed: u64,
        /// Target fraction of zero atoms, as `p/q`.
        #[arg(long, value_parser = rational, default_value = "0")]
        sparsity: Rational,
        #[arg(short = 'o', long = "output", value_name = "MEASURE")]
        output: PathBuf,
        #[arg(long, value_name = "DATA")]
        emit_data: Option<PathBuf>,
    },
    /// Sample, induce, construct and compare, over many seeds.
    Roundtrip {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = rational, default_value = "0")]
        sparsity: Rational,
    },
    /// Check the summation identities of joint sums.
    Identities {
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// Test the n-period conjecture on sampled (optionally perturbed) data.
    Conjecture {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Perturb each induced dataset before testing it.
        #[arg(long)]
        adversarial: bool,
        /// Mass moved by a perturbation, as `p/q`.
        #[arg(long, value_parser = rational, default_value = "1/8")]
        epsilon: Rational,
        #[arg(long, value_parser = rational, default_value = "0")]
        sparsity: Rational,
        /// Where counterexample datasets are written.
        #[arg(long, value_name = "DIR", default_value = "counterexamples")]
        dump_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct Shape {
    #[arg(long)]
    pub periods: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Edge,
    Direct,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Prop1,
    Prop2,
    Claim1,
    Corner,
    All,
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}
