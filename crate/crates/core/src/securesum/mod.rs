//! Secure summation with user selection.
//!
//! Each user holds a key `Z_k` and an input `W_k` of `L` symbols. For a
//! selected set `U` every selected user sends `X_u = W_u + G_u Z_u` where the
//! masks `G_u Z_u` sum to zero, so the server recovers exactly `sum W_u`.

mod converse;
mod keys;
mod protocol;
mod security;
mod table2;

use std::sync::Arc;

pub use converse::{check_summation_converse, ConverseOptions};
pub use keys::{annihilating_coefficients, KeyDocument, KeyMaterial};
pub use protocol::{decode, encode, run_selection, single_user, SelectionRun, Transcript};
pub use security::{security_check, JointSpace};
pub use table2::Table2Keys;

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, PrimeField};
use crate::linrv::{LinearRV, SeedSpace};
use crate::mdsgen::MdsParams;
use crate::rational::{harmonic, Rational};
use crate::subsets::factorial;

/// `K` users over GF(q); keys come from levels `1..=K-1` with block `(K-1)!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummationParams {
    mds: MdsParams,
}

impl SummationParams {
    pub fn new(k: usize, q: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams("secure summation needs K >= 2".into()));
        }
        Ok(Self {
            mds: MdsParams::new(k, q, Some((1..k).collect()), Some(factorial(k - 1)))?,
        })
    }

    pub fn k(&self) -> usize {
        self.mds.k()
    }

    pub fn q(&self) -> u64 {
        self.mds.q()
    }

    /// Input length `L = (K-1)!` symbols.
    pub fn input_len(&self) -> usize {
        self.mds.block()
    }

    pub fn mds_params(&self) -> &MdsParams {
        &self.mds
    }

    /// `1 + 1/2 + .. + 1/(K-1)`.
    pub fn optimal_key_rate(&self) -> Rational {
        harmonic(self.k() - 1)
    }
}

/// Anything that can supply keys and cancelling masks for the protocol.
pub trait KeyScheme: Sync {
    fn user_count(&self) -> usize;
    fn field(&self) -> PrimeField;
    /// `L`, symbols per input.
    fn input_len(&self) -> usize;
    /// `L_Z`, symbols per key.
    fn key_len(&self) -> usize;
    /// Seed space the key variables are defined on.
    fn key_space(&self) -> &Arc<SeedSpace>;
    /// Symbolic key `Z_u`.
    fn key_variable(&self, u: usize) -> &LinearRV;
    /// Sampled key value of user `u`.
    fn key_value(&self, u: usize) -> &[u64];

    /// Mask maps `G_u` (`L x L_Z`, one per user of `U` in order), without
    /// requiring each to have full rank. Zero for a single user.
    fn mask_maps_unchecked(&self, users: &[usize]) -> Result<Vec<FieldMatrix>>;

    /// Mask maps as used by the protocol.
    fn mask_maps(&self, users: &[usize]) -> Result<Vec<FieldMatrix>> {
        self.mask_maps_unchecked(users)
    }

    fn key_rate(&self) -> Rational {
        Rational::new(self.key_len() as i64, self.input_len() as i64)
    }
}

/// `U` must be nonempty, strictly increasing and inside `1..=k`.
pub fn validate_selection(users: &[usize], k: usize) -> Result<()> {
    if users.is_empty() {
        return Err(Error::InvalidSelection("empty selection".into()));
    }
    if users.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSelection(format!(
            "{users:?} must be strictly increasing"
        )));
    }
    if users.iter().any(|&u| u == 0 || u > k) {
        return Err(Error::InvalidSelection(format!("{users:?} not inside 1..={k}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params() {
        let p = SummationParams::new(4, 10007).unwrap();
        assert_eq!(p.input_len(), 6);
        assert_eq!(p.mds_params().levels(), &[1, 2, 3]);
        assert_eq!(p.optimal_key_rate(), Rational::new(11, 6));
        assert_eq!(p.mds_params().field_bound(), 168);
        assert!(SummationParams::new(1, 101).is_err());
        assert!(SummationParams::new(4, 167).is_err());
        assert_eq!(SummationParams::new(2, 101).unwrap().input_len(), 1);
    }

    #[test]
    fn selections() {
        assert!(validate_selection(&[1, 3], 3).is_ok());
        assert!(validate_selection(&[], 3).is_err());
        assert!(validate_selection(&[3, 1], 3).is_err());
        assert!(validate_selection(&[1, 1], 3).is_err());
        assert!(validate_selection(&[0, 2], 3).is_err());
        assert!(validate_selection(&[4], 3).is_err());
    }
}
