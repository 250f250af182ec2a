use std::path::PathBuf;

use clap::Args;
use mdsvar::mdsgen::{derive_variables, vandermonde_baseline, SchemeDocument};
use mdsvar::mdsverify::{verify_conditions, verify_variables, SubsetSweep};
use mdsvar::rational::{format_rate, harmonic};
use mdsvar::{Check, EntropyValue, VerifyReport};

use crate::output::{emit, read_file, summarize, to_json, Failure};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Scheme JSON written by `gen`.
    #[arg(long = "in", conflicts_with = "baseline", required_unless_present = "baseline")]
    pub input: Option<PathBuf>,
    /// Check the Reed-Solomon baseline (one symbol per level) instead of a file.
    #[arg(long, requires = "k")]
    pub baseline: bool,
    /// Users for `--baseline`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Field modulus for `--baseline`.
    #[arg(long, default_value_t = 11)]
    pub q: u64,
    /// Subsets sampled per size once K exceeds 6.
    #[arg(long, default_value_t = SubsetSweep::default().cap_per_size)]
    pub subset_cap: usize,
    /// Seed for subset sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report JSON destination (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &VerifyArgs) -> Result<bool, Failure> {
    let sweep = SubsetSweep {
        cap_per_size: args.subset_cap,
        seed: args.seed,
        ..SubsetSweep::default()
    };
    let (title, report, rate) = match &args.input {
        Some(path) => {
            let doc = SchemeDocument::from_json(&read_file(path)?)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let scheme = doc.to_scheme_unchecked()?;
            let mut report = verify_conditions(&scheme);
            let vars = derive_variables(&scheme)?;
            report.extend(verify_variables(&vars, &sweep)?);
            let n_max = vars.n_max();
            let l = vars.block() as i64;
            report.push(Check::eq(
                format!("source length vs harmonic target n_max={n_max}"),
                EntropyValue::symbols(vars.sources()[0].len() as i64),
                EntropyValue::from_rational(harmonic(n_max) * l),
            ));
            (path.display().to_string(), report, vars.rate())
        }
        None => {
            let k = args.k.expect("clap enforces --k with --baseline");
            let vars = vandermonde_baseline(k, args.q)?;
            let report: VerifyReport = verify_variables(&vars, &sweep)?;
            (format!("baseline K={k} q={}", args.q), report, vars.rate())
        }
    };
    emit(args.out.as_ref(), &to_json(&report))?;
    summarize(&title, &report);
    eprintln!("rate: {}", format_rate(&rate));
    Ok(report.overall)
}
