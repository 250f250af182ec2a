//! Checks of the MDS property and of the converse lemmas on concrete
//! variable sets. Every check is an exact rank comparison.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linrv::{check_chain_identity, entropy, mutual_information, EntropyValue, LinearRV};
use crate::mdsgen::{MdsScheme, MdsVariables};
use crate::rational::{harmonic, Rational};
use crate::report::{Check, VerifyReport};
use crate::rng::seeded;
use crate::subsets::{sample_subsets_of_size, subsets_of_size};

/// How many user subsets a sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetSweep {
    /// Enumerate every subset when `K` is at most this.
    pub exhaustive_max_k: usize,
    /// Subsets drawn per size otherwise.
    pub cap_per_size: usize,
    pub seed: u64,
}

impl Default for SubsetSweep {
    fn default() -> Self {
        Self {
            exhaustive_max_k: 6,
            cap_per_size: 32,
            seed: 0,
        }
    }
}

impl SubsetSweep {
    pub fn with_cap(cap_per_size: usize) -> Self {
        Self {
            cap_per_size,
            ..Self::default()
        }
    }

    /// Subsets of `1..=k` of the given size.
    pub fn of_size(&self, k: usize, size: usize) -> Vec<Vec<usize>> {
        if k <= self.exhaustive_max_k {
            subsets_of_size(k, size)
        } else {
            let mut rng = seeded(self.seed ^ ((k as u64) << 32) ^ size as u64);
            sample_subsets_of_size(&mut rng, k, size, self.cap_per_size)
        }
    }

    /// Nonempty subsets of `1..=k`, by size.
    pub fn all(&self, k: usize) -> Vec<Vec<usize>> {
        (1..=k).flat_map(|s| self.of_size(k, s)).collect()
    }
}

pub(crate) fn set_label(users: &[usize]) -> String {
    let parts: Vec<String> = users.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn sym(n: usize) -> EntropyValue {
    EntropyValue::symbols(n as i64)
}

fn level_vars<'a>(vars: &'a MdsVariables, users: &[usize], n: usize) -> Result<Vec<&'a LinearRV>> {
    users.iter().map(|&k| vars.variable(k, n)).collect()
}

/// `H((Z_k^n)_{k in U}) = min(|U|, n) * L` for every swept `U`.
pub fn verify_mds(vars: &MdsVariables, n: usize, sweep: &SubsetSweep) -> Result<VerifyReport> {
    if !vars.has_level(n) {
        return Err(Error::MissingLevel(n));
    }
    let checks = sweep
        .all(vars.k())
        .par_iter()
        .map(|users| {
            let h = entropy(&level_vars(vars, users, n)?)?;
            Ok(Check::eq(
                format!("mds n={n} U={}", set_label(users)),
                h,
                sym(users.len().min(n) * vars.block()),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(checks.into_iter().collect())
}

/// Every `Z_k^n` is a function of `Z_k`.
pub fn verify_derivability(vars: &MdsVariables) -> Result<VerifyReport> {
    (1..=vars.k())
        .map(|k| {
            let mut all = vec![vars.source(k)];
            for n in vars.levels() {
                all.push(vars.variable(k, n)?);
            }
            Ok(Check::eq(
                format!("derivability k={k}"),
                entropy(&all)?,
                entropy(&[vars.source(k)])?,
            ))
        })
        .collect()
}

/// `H(Z_k)` equals its length, so the source holds no redundant symbols.
pub fn verify_source_entropy(vars: &MdsVariables) -> Result<VerifyReport> {
    (1..=vars.k())
        .map(|k| {
            let z = vars.source(k);
            Ok(Check::eq(format!("source entropy k={k}"), entropy(&[z])?, sym(z.len())))
        })
        .collect()
}

fn validate_set(vars: &MdsVariables, users: &[usize], n: usize) -> Result<()> {
    if users.len() != n {
        return Err(Error::InvalidSelection(format!(
            "{} has {} users, expected {n}",
            set_label(users),
            users.len()
        )));
    }
    if users.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSelection(format!(
            "{} must be strictly increasing",
            set_label(users)
        )));
    }
    for &u in users {
        vars.check_user(u)?;
    }
    if !vars.has_level(n) {
        return Err(Error::MissingLevel(n));
    }
    Ok(())
}

/// `I(Z_k^{<=n}; (Z_u^{<=n})_{u in U}) = H(Z_k^{<=n})` for `|U| = n`, `k` not in `U`.
pub fn check_lemma_absorption(vars: &MdsVariables, n: usize, k: usize, users: &[usize]) -> Result<Check> {
    validate_set(vars, users, n)?;
    vars.check_user(k)?;
    if users.contains(&k) {
        return Err(Error::InvalidSelection(format!("{k} is in {}", set_label(users))));
    }
    let zk = vars.cumulative(k, n)?;
    let others = users
        .iter()
        .map(|&u| vars.cumulative(u, n))
        .collect::<Result<Vec<_>>>()?;
    let others: Vec<&LinearRV> = others.iter().collect();
    Ok(Check::eq(
        format!("absorption n={n} k={k} U={}", set_label(users)),
        mutual_information(&[&zk], &others)?,
        entropy(&[&zk])?,
    ))
}

/// `(1/n) sum_{k in U} H(Z_k^{<=n}) >= (1 + 1/2 + .. + 1/n) L` for `|U| = n`.
pub fn check_harmonic_bound(vars: &MdsVariables, n: usize, users: &[usize]) -> Result<Check> {
    validate_set(vars, users, n)?;
    let mut total = Rational::from(0);
    for &k in users {
        total += entropy(&[&vars.cumulative(k, n)?])?.as_rational();
    }
    Ok(Check::ge(
        format!("harmonic bound n={n} U={}", set_label(users)),
        EntropyValue::from_rational(total / n as i64),
        EntropyValue::from_rational(harmonic(n) * vars.block() as i64),
    ))
}

/// MDS sweep at every level plus derivability, source entropy, chain
/// identities, absorption and harmonic bounds.
pub fn verify_variables(vars: &MdsVariables, sweep: &SubsetSweep) -> Result<VerifyReport> {
    let mut report = VerifyReport::new();
    for n in vars.levels() {
        report.extend(verify_mds(vars, n, sweep)?);
    }
    report.extend(verify_derivability(vars)?);
    report.extend(verify_source_entropy(vars)?);
    for n in vars.levels() {
        let level = level_vars(vars, &(1..=vars.k()).collect::<Vec<_>>(), n)?;
        if level.len() >= 2 {
            let mut c = check_chain_identity(&level)?;
            c.label = format!("chain identity n={n}");
            report.push(c);
        }
    }
    for n in vars.levels() {
        let sets = sweep.of_size(vars.k(), n);
        let absorption = sets
            .par_iter()
            .map(|users| {
                (1..=vars.k())
                    .filter(|k| !users.contains(k))
                    .map(|k| check_lemma_absorption(vars, n, k, users))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        report.extend(absorption.into_iter().flatten().collect());
        let bounds = sets
            .par_iter()
            .map(|users| check_harmonic_bound(vars, n, users))
            .collect::<Result<Vec<_>>>()?;
        report.extend(bounds.into_iter().collect());
    }
    Ok(report)
}

/// One rank check per condition matrix: `rank = block`.
pub fn verify_conditions(scheme: &MdsScheme) -> VerifyReport {
    let block = scheme.params().block();
    scheme
        .condition_matrices()
        .par_iter()
        .map(|c| Check::eq(format!("rank {}", c.label), sym(c.matrix.rank()), sym(block)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Condition-matrix ranks followed by [`verify_variables`] on the derived variables.
pub fn verify_scheme(scheme: &MdsScheme, sweep: &SubsetSweep) -> Result<VerifyReport> {
    let mut report = verify_conditions(scheme);
    let vars = crate::mdsgen::derive_variables(scheme)?;
    report.extend(verify_variables(&vars, sweep)?);
    Ok(report)
}
