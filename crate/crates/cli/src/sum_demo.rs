use std::path::PathBuf;

use clap::Args;
use mdsvar::mdsgen::DEFAULT_MAX_ATTEMPTS;
use mdsvar::mdsverify::SubsetSweep;
use mdsvar::rational::{as_string, format_rate};
use mdsvar::rng::{seeded, RNG_ALGORITHM};
use mdsvar::securesum::{
    run_selection, security_check, KeyDocument, KeyMaterial, KeyScheme, SummationParams, Table2Keys, Transcript,
};
use mdsvar::{FieldMatrix, Rational, VerifyReport};
use serde::Serialize;

use crate::output::{emit, read_file, summarize, to_json, Failure};

#[derive(Debug, Args)]
pub struct SumDemoArgs {
    /// Number of users.
    #[arg(long, required_unless_present = "input")]
    pub k: Option<usize>,
    /// Prime field modulus.
    #[arg(long, default_value_t = 10007)]
    pub q: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the uncoded three-user keys over A, B, C, D instead of an MDS scheme.
    #[arg(long, conflicts_with_all = ["input", "keys_out"])]
    pub table2: bool,
    /// Random-input round trips per selection.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Key JSON from an earlier `--keys-out`.
    #[arg(long = "in", conflicts_with = "k")]
    pub input: Option<PathBuf>,
    /// Also write the sampled keys.
    #[arg(long)]
    pub keys_out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: usize,
    /// Selections sampled per size once K exceeds 6.
    #[arg(long, default_value_t = SubsetSweep::default().cap_per_size)]
    pub subset_cap: usize,
    /// Transcript JSON destination (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct RoundTrips {
    #[serde(rename = "U")]
    users: Vec<usize>,
    trials: usize,
    correct: usize,
}

#[derive(Debug, Serialize)]
struct DemoDocument {
    #[serde(rename = "K")]
    k: usize,
    q: u64,
    rng: &'static str,
    rng_seed: u64,
    table2: bool,
    #[serde(rename = "L")]
    input_len: usize,
    #[serde(rename = "L_Z")]
    key_len: usize,
    #[serde(with = "as_string")]
    key_rate: Rational,
    round_trips: Vec<RoundTrips>,
    runs: Vec<Transcript>,
}

enum Keys {
    Mds(Box<KeyMaterial>),
    Table2(Table2Keys),
}

impl Keys {
    fn scheme(&self) -> &dyn KeyScheme {
        match self {
            Keys::Mds(k) => k.as_ref(),
            Keys::Table2(k) => k,
        }
    }
}

pub fn run(args: &SumDemoArgs) -> Result<bool, Failure> {
    let mut rng = seeded(args.seed);
    let keys = if let Some(path) = &args.input {
        let doc =
            KeyDocument::from_json(&read_file(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        Keys::Mds(Box::new(KeyMaterial::from_document(&doc)?))
    } else if args.table2 {
        if args.k != Some(3) {
            return Err(Failure::Usage("--table2 needs --k 3".into()));
        }
        Keys::Table2(Table2Keys::new(args.q, &mut rng)?)
    } else {
        let k = args.k.expect("clap enforces --k");
        let params = SummationParams::new(k, args.q)?;
        Keys::Mds(Box::new(KeyMaterial::setup(&params, &mut rng, args.max_attempts)?))
    };
    if let (Some(path), Keys::Mds(m)) = (&args.keys_out, &keys) {
        emit(Some(path), &m.to_document().to_json())?;
    }
    let ks = keys.scheme();
    let (k, field, l) = (ks.user_count(), ks.field(), ks.input_len());
    let sweep = SubsetSweep {
        cap_per_size: args.subset_cap,
        seed: args.seed,
        ..SubsetSweep::default()
    };
    let family: Vec<Vec<usize>> = (2..=k).flat_map(|s| sweep.of_size(k, s)).collect();

    let mut report = VerifyReport::new();
    let mut round_trips = Vec::with_capacity(family.len());
    let mut runs = Vec::with_capacity(family.len());
    for users in &family {
        let security = security_check(ks, users)?;
        let mut correct = 0;
        let mut first = None;
        for _ in 0..args.trials {
            let inputs: Vec<Vec<u64>> = users
                .iter()
                .map(|_| FieldMatrix::random(&mut rng, 1, l, field).row(0).to_vec())
                .collect();
            let run = run_selection(ks, users, &inputs)?;
            correct += usize::from(run.is_correct(field));
            first.get_or_insert(run);
        }
        if let Some(run) = first {
            runs.push(Transcript::new(ks, &run, security.checks.clone()));
        }
        round_trips.push(RoundTrips {
            users: users.clone(),
            trials: args.trials,
            correct,
        });
        report.extend(security);
    }

    let failed_trips = round_trips.iter().filter(|r| r.correct != r.trials).count();
    let doc = DemoDocument {
        k,
        q: field.modulus(),
        rng: RNG_ALGORITHM,
        rng_seed: args.seed,
        table2: matches!(keys, Keys::Table2(_)),
        input_len: l,
        key_len: ks.key_len(),
        key_rate: ks.key_rate(),
        round_trips,
        runs,
    };
    emit(args.out.as_ref(), &to_json(&doc))?;
    summarize(&format!("sum-demo K={k} q={}", field.modulus()), &report);
    eprintln!(
        "selections: {}, round trips: {} x {} ({} selections with wrong sums)",
        family.len(),
        family.len(),
        args.trials,
        failed_trips
    );
    eprintln!("key rate: {}", format_rate(&ks.key_rate()));
    Ok(report.overall && failed_trips == 0)
}
