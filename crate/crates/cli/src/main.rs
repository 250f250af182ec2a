//! `mdsvar`: generate, verify and exercise MDS variable schemes and
//! secure-summation keys from the command line.
//!
//! Exit status: 0 all checks pass, 1 a check failed, 2 invalid arguments,
//! 3 I/O or parse error.

mod bounds;
mod gen;
mod output;
mod selftest;
mod sum_demo;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "mdsvar",
    version,
    about = "MDS variable generation and secure summation over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample and certify an MDS variable-generation scheme.
    Gen(gen::GenArgs),
    /// Check a scheme file (or the Reed-Solomon baseline) against the MDS definition and lemmas.
    Verify(verify::VerifyArgs),
    /// Run secure summation for every selectable user set.
    SumDemo(sum_demo::SumDemoArgs),
    /// Harmonic-number targets against achieved rates, with lemma checks.
    Bounds(bounds::BoundsArgs),
    /// Cross-check the rank calculus against brute-force enumeration.
    Selftest(selftest::SelftestArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::SumDemo(a) => sum_demo::run(&a),
        Command::Bounds(a) => bounds::run(&a),
        Command::Selftest(a) => selftest::run(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
