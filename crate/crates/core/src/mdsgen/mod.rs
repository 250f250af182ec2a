//! Construction of MDS variable-generation schemes.
//!
//! User `k` stores `Z_k = (H_k^n S^n)_n` and derives, for each level `n`,
//! `Z_k^n = ((V_k^{n<-m} H_k^m S^m)_{m<n}, H_k^n S^n)`. Generator matrices are
//! drawn uniformly and kept only if every condition matrix is invertible.

mod baseline;
mod io;
mod scheme;
mod variables;

pub use baseline::{table1_fixture, vandermonde_baseline};
pub use io::{HEntry, SchemeDocument, VEntry, SCHEME_FORMAT_VERSION};
pub use scheme::{generate, sample_scheme, ConditionLabel, ConditionMatrix, MdsScheme, DEFAULT_MAX_ATTEMPTS};
pub use variables::{derive_variables, MdsVariables};

use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::rational::{harmonic, Rational};
use crate::subsets::{binomial, factorial};

/// Parameters of a generated scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsParams {
    k: usize,
    levels: Vec<usize>,
    field: PrimeField,
    block: usize,
}

impl MdsParams {
    /// `levels = None` means all of `1..=k`; `block = None` means `n_max!`.
    pub fn new(k: usize, q: u64, levels: Option<Vec<usize>>, block: Option<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("K must be at least 1".into()));
        }
        let field = PrimeField::new(q)?;
        let levels = levels.unwrap_or_else(|| (1..=k).collect());
        if levels.is_empty() || levels.iter().enumerate().any(|(i, &n)| n != i + 1) {
            return Err(Error::InvalidParams(format!(
                "levels must be the contiguous range 1..=n_max, got {levels:?}"
            )));
        }
        let n_max = levels.len();
        if n_max > k {
            return Err(Error::InvalidParams(format!("level {n_max} exceeds K = {k}")));
        }
        let block = block.unwrap_or_else(|| factorial(n_max));
        if block == 0 {
            return Err(Error::InvalidParams("block must be positive".into()));
        }
        if let Some(n) = levels.iter().find(|&&n| !block.is_multiple_of(n)) {
            return Err(Error::InvalidParams(format!(
                "block {block} is not divisible by level {n}"
            )));
        }
        let params = Self {
            k,
            levels,
            field,
            block,
        };
        let bound = params.field_bound();
        if (q as u128) <= bound {
            return Err(Error::FieldTooSmall { q, bound });
        }
        Ok(params)
    }

    /// Full problem: levels `1..=k`, block `k!`.
    pub fn full(k: usize, q: u64) -> Result<Self> {
        Self::new(k, q, None, None)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn n_max(&self) -> usize {
        self.levels.len()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u64 {
        self.field.modulus()
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// `block * sum_n n * C(K, n)`; the modulus must exceed this.
    pub fn field_bound(&self) -> u128 {
        self.block as u128 * condition_count(self.k, &self.levels) as u128
    }

    /// Rows of `Z_k`: `sum_n block / n`.
    pub fn source_len(&self) -> usize {
        self.levels.iter().map(|n| self.block / n).sum()
    }
}

/// Number of condition matrices, `sum_n n * C(K, n)`.
pub fn condition_count(k: usize, levels: &[usize]) -> usize {
    levels.iter().map(|&n| n * binomial(k, n) as usize).sum()
}

/// `1 + 1/2 + ... + 1/K`.
pub fn optimal_rate(k: usize) -> Rational {
    harmonic(k)
}

/// `L_Z / L` from the scheme's matrix dimensions.
pub fn scheme_rate(scheme: &MdsScheme) -> Rational {
    let p = scheme.params();
    Rational::new(p.source_len() as i64, p.block() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_bounds() {
        assert_eq!(MdsParams::full(3, 73).unwrap().field_bound(), 72);
        assert_eq!(MdsParams::full(3, 71), Err(Error::FieldTooSmall { q: 71, bound: 72 }));
        assert_eq!(MdsParams::full(4, 769).unwrap().field_bound(), 768);
        assert!(MdsParams::full(4, 761).is_err());
        let sum = MdsParams::new(4, 10007, Some(vec![1, 2, 3]), None).unwrap();
        assert_eq!(sum.block(), 6);
        assert_eq!(sum.field_bound(), 168);
        assert_eq!(MdsParams::full(1, 2).unwrap().field_bound(), 1);
    }

    #[test]
    fn parameter_validation() {
        assert!(MdsParams::new(0, 5, None, None).is_err());
        assert!(MdsParams::new(3, 10007, Some(vec![1, 3]), None).is_err());
        assert!(MdsParams::new(3, 10007, Some(vec![]), None).is_err());
        assert!(MdsParams::new(3, 10007, Some(vec![1, 2, 3, 4]), None).is_err());
        assert!(MdsParams::new(3, 10007, None, Some(4)).is_err());
        assert_eq!(MdsParams::new(3, 10007, None, None).unwrap().source_len(), 11);
        assert_eq!(MdsParams::new(3, 10007, None, Some(12)).unwrap().source_len(), 22);
        assert_eq!(MdsParams::new(3, 9, None, None), Err(Error::NotPrime(9)));
    }

    #[test]
    fn optimal_rates() {
        let expected = [
            (1, 1),
            (3, 2),
            (11, 6),
            (25, 12),
            (137, 60),
            (49, 20),
            (363, 140),
            (761, 280),
        ];
        for (k, (n, d)) in expected.iter().enumerate() {
            assert_eq!(optimal_rate(k + 1), Rational::new(*n, *d));
        }
    }

    #[test]
    fn condition_counts() {
        assert_eq!(condition_count(3, &[1, 2, 3]), 12);
        assert_eq!(condition_count(4, &[1, 2, 3, 4]), 32);
        assert_eq!(condition_count(1, &[1]), 1);
    }
}
