use std::path::PathBuf;

use clap::Args;
use mdsvar::mdsgen::{derive_variables, generate, optimal_rate, scheme_rate, MdsParams, DEFAULT_MAX_ATTEMPTS};
use mdsvar::mdsverify::{verify_variables, SubsetSweep};
use mdsvar::rational::{as_string, format_rate, harmonic};
use mdsvar::rng::{seeded, RNG_ALGORITHM};
use mdsvar::securesum::{check_summation_converse, ConverseOptions, KeyMaterial, KeyScheme, SummationParams};
use mdsvar::{Check, EntropyValue, Rational, VerifyReport};
use serde::Serialize;

use crate::output::{emit, summarize, to_json, Failure};

/// Rows of the printed harmonic table.
const TABLE_MAX_K: usize = 8;

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Also build a scheme (and summation keys when K >= 2) for this many
    /// users and check them against the targets.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 10007)]
    pub q: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: usize,
    /// Subsets, orderings and partitions sampled per size on large K.
    #[arg(long, default_value_t = SubsetSweep::default().cap_per_size)]
    pub subset_cap: usize,
    /// Report JSON destination (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct HarmonicRow {
    #[serde(rename = "K")]
    k: usize,
    #[serde(with = "as_string")]
    rate: Rational,
}

#[derive(Debug, Serialize)]
struct RateRow {
    what: &'static str,
    #[serde(with = "as_string")]
    target: Rational,
    #[serde(with = "as_string")]
    achieved: Rational,
}

#[derive(Debug, Serialize)]
struct BoundsDocument {
    harmonic: Vec<HarmonicRow>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    rng: &'static str,
    rng_seed: u64,
    rates: Vec<RateRow>,
    report: VerifyReport,
}

fn length_check(label: String, achieved: usize, target: Rational, l: usize) -> Check {
    Check::eq(
        label,
        EntropyValue::symbols(achieved as i64),
        EntropyValue::from_rational(target * l as i64),
    )
}

pub fn run(args: &BoundsArgs) -> Result<bool, Failure> {
    let table: Vec<HarmonicRow> = (1..=TABLE_MAX_K)
        .map(|k| HarmonicRow { k, rate: harmonic(k) })
        .collect();
    for row in &table {
        eprintln!("K={}  H_K = {}", row.k, format_rate(&row.rate));
    }

    let mut rates = Vec::new();
    let mut report = VerifyReport::new();
    if let Some(k) = args.k {
        let sweep = SubsetSweep {
            cap_per_size: args.subset_cap,
            seed: args.seed,
            ..SubsetSweep::default()
        };
        let params = MdsParams::full(k, args.q)?;
        let scheme = generate(&params, args.seed, args.max_attempts)?;
        let vars = derive_variables(&scheme)?;
        rates.push(RateRow {
            what: "mds",
            target: optimal_rate(k),
            achieved: scheme_rate(&scheme),
        });
        report.push(length_check(
            format!("mds source length K={k}"),
            params.source_len(),
            optimal_rate(k),
            params.block(),
        ));
        report.extend(verify_variables(&vars, &sweep)?);

        if k >= 2 {
            let sp = SummationParams::new(k, args.q)?;
            let mut rng = seeded(args.seed);
            let keys = KeyMaterial::setup(&sp, &mut rng, args.max_attempts)?;
            rates.push(RateRow {
                what: "summation key",
                target: sp.optimal_key_rate(),
                achieved: keys.key_rate(),
            });
            report.push(length_check(
                format!("summation key length K={k}"),
                keys.key_len(),
                sp.optimal_key_rate(),
                keys.input_len(),
            ));
            let family: Vec<Vec<usize>> = (2..=k).flat_map(|s| sweep.of_size(k, s)).collect();
            let opts = ConverseOptions {
                sample_cap: args.subset_cap.max(1),
                seed: args.seed,
                ..ConverseOptions::default()
            };
            report.extend(check_summation_converse(&keys, &family, &opts)?);
        }
    }

    for r in &rates {
        eprintln!(
            "{}: achieved {} target {}",
            r.what,
            format_rate(&r.achieved),
            format_rate(&r.target)
        );
    }
    let doc = BoundsDocument {
        harmonic: table,
        k: args.k,
        q: args.k.map(|_| args.q),
        rng: RNG_ALGORITHM,
        rng_seed: args.seed,
        rates,
        report,
    };
    emit(args.out.as_ref(), &to_json(&doc))?;
    summarize("bounds", &doc.report);
    Ok(doc.report.overall)
}
