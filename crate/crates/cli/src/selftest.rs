use std::path::PathBuf;

use clap::Args;
use mdsvar::linrv::{brute_force_entropy, check_chain_identity, entropy, restrict_to_segment};
use mdsvar::mdsgen::{table1_fixture, vandermonde_baseline, MdsVariables};
use mdsvar::rng::{seeded, RNG_ALGORITHM};
use mdsvar::subsets::nonempty_subsets;
use mdsvar::{Check, EntropyValue, FieldMatrix, LinearRV, PrimeField, SeedSpace, VerifyReport};
use rand::Rng;
use serde::Serialize;

use crate::output::{emit, summarize, to_json, Failure};

const TOLERANCE_BITS: f64 = 1e-9;

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random instances per field size.
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    /// Oracle results as JSON (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct OracleCase {
    label: String,
    q: u64,
    dim: usize,
    rank: EntropyValue,
    rank_bits: f64,
    brute_bits: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct SelftestDocument {
    rng: &'static str,
    rng_seed: u64,
    tolerance_bits: f64,
    oracle: Vec<OracleCase>,
    report: VerifyReport,
}

fn compare(label: String, vars: &[&LinearRV]) -> Result<OracleCase, Failure> {
    let space = vars[0].space();
    let q = space.field().modulus();
    let rank = entropy(vars)?;
    let rank_bits = rank.bits(q);
    let brute_bits = brute_force_entropy(vars)?;
    Ok(OracleCase {
        label,
        q,
        dim: space.dim(),
        rank,
        rank_bits,
        brute_bits,
        pass: (rank_bits - brute_bits).abs() <= TOLERANCE_BITS,
    })
}

/// Random variables over `GF(q)^dim`, some with deliberately dependent rows.
fn random_instance<R: Rng>(rng: &mut R, q: u64, max_dim: usize) -> Result<Vec<LinearRV>, Failure> {
    let field = PrimeField::new(q)?;
    let dim = rng.gen_range(1..=max_dim);
    let space = SeedSpace::new(field, [("S", dim)])?;
    let count = rng.gen_range(1..=3);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let rows = rng.gen_range(1..=dim.min(4) + 1);
        let map = if rng.gen_bool(0.3) {
            // Rank at most `inner`, below the row count.
            let inner = rng.gen_range(0..rows);
            FieldMatrix::random(rng, rows, inner, field).mat_mul(&FieldMatrix::random(rng, inner, dim, field))?
        } else {
            FieldMatrix::random(rng, rows, dim, field)
        };
        out.push(LinearRV::new(format!("v{i}"), map, &space)?);
    }
    Ok(out)
}

/// Every subset of users at every level, each restricted to its own level
/// segment so the seed space is small enough to enumerate.
fn fixture_cases(name: &str, vars: &MdsVariables, report: &mut VerifyReport) -> Result<Vec<OracleCase>, Failure> {
    let mut cases = Vec::new();
    for n in vars.levels() {
        for users in nonempty_subsets(vars.k()) {
            let full = users
                .iter()
                .map(|&u| vars.variable(u, n))
                .collect::<mdsvar::Result<Vec<_>>>()?;
            let small = restrict_to_segment(&full, &format!("S^{n}"))?;
            let refs: Vec<&LinearRV> = small.iter().collect();
            let label = format!("{name} n={n} U={users:?}");
            report.push(Check::eq(
                label.clone(),
                entropy(&refs)?,
                EntropyValue::symbols(users.len().min(n) as i64),
            ));
            cases.push(compare(label, &refs)?);
        }
    }
    Ok(cases)
}

pub fn run(args: &SelftestArgs) -> Result<bool, Failure> {
    let mut rng = seeded(args.seed);
    let mut oracle = Vec::new();
    let mut report = VerifyReport::new();

    for (q, max_dim) in [(2, 12), (3, 10), (5, 7)] {
        for i in 0..args.cases {
            let vars = random_instance(&mut rng, q, max_dim)?;
            let refs: Vec<&LinearRV> = vars.iter().collect();
            oracle.push(compare(format!("random q={q} #{i}"), &refs)?);
        }
    }

    let field = PrimeField::new(10007)?;
    for i in 0..10 {
        let dim = rng.gen_range(2..=12);
        let space = SeedSpace::new(field, [("S", dim)])?;
        let count = rng.gen_range(2..=6);
        let vars = (0..count)
            .map(|j| {
                let rows = rng.gen_range(1..=dim);
                LinearRV::new(format!("v{j}"), FieldMatrix::random(&mut rng, rows, dim, field), &space)
            })
            .collect::<mdsvar::Result<Vec<_>>>()?;
        let mut c = check_chain_identity(&vars.iter().collect::<Vec<_>>())?;
        c.label = format!("chain identity list {i}");
        report.push(c);
    }

    oracle.extend(fixture_cases("table1 q=5", &table1_fixture(), &mut report)?);
    oracle.extend(fixture_cases(
        "vandermonde K=5 q=11",
        &vandermonde_baseline(5, 11)?,
        &mut report,
    )?);

    let failed_oracle: Vec<&OracleCase> = oracle.iter().filter(|c| !c.pass).collect();
    eprintln!(
        "oracle: {} cases, {} outside {TOLERANCE_BITS:e} bits",
        oracle.len(),
        failed_oracle.len()
    );
    if let Some(c) = failed_oracle.first() {
        eprintln!(
            "  first failure: {} rank {} bits, enumeration {} bits",
            c.label, c.rank_bits, c.brute_bits
        );
    }
    summarize("exact checks", &report);
    let pass = failed_oracle.is_empty() && report.overall;
    let doc = SelftestDocument {
        rng: RNG_ALGORITHM,
        rng_seed: args.seed,
        tolerance_bits: TOLERANCE_BITS,
        oracle,
        report,
    };
    emit(args.out.as_ref(), &to_json(&doc))?;
    Ok(pass)
}
