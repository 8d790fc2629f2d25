//! `dynchoice`: validate, check, construct and verify dynamic stochastic
//! choice data from the command line.
//!
//! Exit status: 0 on success, 1 when an axiom or verification fails or a
//! counterexample is found, 2 on unusable input or arguments.

mod args;
mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use commands::{InputError, SweepArgs};
use report::{render_json, render_text, Outcome};

fn run(command: &Command) -> Result<Outcome, InputError> {
    match command {
        Command::Validate { data } => commands::validate(data),
        Command::Check { data, strict } => commands::check(data, *strict),
        Command::Construct { data, output } => commands::construct(data, output),
        Command::Verify { measure, data, mode } => commands::verify(measure, data, *mode),
        Command::Generate {
            shape,
            seed,
            sparsity,
            output,
            emit_data,
        } => commands::generate(shape, *seed, sparsity, output, emit_data.as_deref()),
        Command::Roundtrip {
            shape,
            trials,
            seed,
            sparsity,
        } => commands::roundtrip(shape, *trials, *seed, sparsity),
        Command::Identities { data, which } => commands::identities(data, *which),
        Command::Conjecture {
            sizes,
            trials,
            seed,
            adversarial,
            epsilon,
            sparsity,
            dump_dir,
        } => commands::conjecture(SweepArgs {
            sizes,
            trials: *trials,
            seed: *seed,
            adversarial: *adversarial,
            epsilon,
            sparsity,
            dump_dir,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    match run(&cli.command) {
        Ok(outcome) => {
            let elapsed = cli.timing.then(|| start.elapsed());
            let text = if cli.json {
                render_json(&argv, &outcome, elapsed)
            } else {
                render_text(&argv, &outcome, elapsed)
            };
            print!("{text}");
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
