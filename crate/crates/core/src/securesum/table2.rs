use std::sync::Arc;

use rand::Rng;

use super::{validate_selection, KeyScheme};
use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, PrimeField};
use crate::linrv::{LinearRV, SeedSpace};

/// Uncoded three-user keys over `A, B, C, D`: `Z_1 = (A, B, C)`,
/// `Z_2 = (A, B, D)`, `Z_3 = (A, C, D)`. Inputs are two symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Keys {
    field: PrimeField,
    space: Arc<SeedSpace>,
    keys: Vec<LinearRV>,
    seed_values: Vec<u64>,
    z_values: Vec<Vec<u64>>,
}

const SEGMENTS: [&str; 4] = ["A", "B", "C", "D"];
const HOLDINGS: [[&str; 3]; 3] = [["A", "B", "C"], ["A", "B", "D"], ["A", "C", "D"]];

impl Table2Keys {
    /// Keys with the seed `(A, B, C, D)` drawn from `rng`. Needs `q >= 5`.
    pub fn new<R: Rng + ?Sized>(q: u64, rng: &mut R) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if q < 5 {
            return Err(Error::FieldTooSmall { q, bound: 4 });
        }
        let seed = FieldMatrix::random(rng, 1, 4, field).row(0).to_vec();
        Self::with_seed(field, seed)
    }

    pub fn with_seed(field: PrimeField, seed_values: Vec<u64>) -> Result<Self> {
        if seed_values.len() != 4 {
            return Err(Error::LengthMismatch {
                expected: 4,
                found: seed_values.len(),
            });
        }
        let space = SeedSpace::new(field, SEGMENTS.map(|s| (s, 1)))?;
        let one = FieldMatrix::identity(field, 1);
        let keys = HOLDINGS
            .iter()
            .enumerate()
            .map(|(i, held)| {
                let parts = held
                    .iter()
                    .map(|s| LinearRV::from_segments(*s, &space, 1, &[(*s, &one)]))
                    .collect::<Result<Vec<_>>>()?;
                LinearRV::stack(format!("Z_{}", i + 1), &parts.iter().collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let z_values = keys
            .iter()
            .map(|z| z.evaluate(&seed_values))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            field,
            space,
            keys,
            seed_values,
            z_values,
        })
    }

    pub fn seed_values(&self) -> &[u64] {
        &self.seed_values
    }
}

impl KeyScheme for Table2Keys {
    fn user_count(&self) -> usize {
        3
    }

    fn field(&self) -> PrimeField {
        self.field
    }

    fn input_len(&self) -> usize {
        2
    }

    fn key_len(&self) -> usize {
        3
    }

    fn key_space(&self) -> &Arc<SeedSpace> {
        &self.space
    }

    fn key_variable(&self, u: usize) -> &LinearRV {
        &self.keys[u - 1]
    }

    fn key_value(&self, u: usize) -> &[u64] {
        &self.z_values[u - 1]
    }

    /// Fixed message table for every selection, in each user's key coordinates.
    fn mask_maps_unchecked(&self, users: &[usize]) -> Result<Vec<FieldMatrix>> {
        validate_selection(users, 3)?;
        let rows: Vec<[[i64; 3]; 2]> = match users {
            [_] => vec![[[0; 3]; 2]],
            // X_1 = W_1 + (A, B), X_2 = W_2 - (A, B)
            [1, 2] => vec![[[1, 0, 0], [0, 1, 0]], [[-1, 0, 0], [0, -1, 0]]],
            // X_1 = W_1 + (A, C), X_3 = W_3 - (A, C)
            [1, 3] => vec![[[1, 0, 0], [0, 0, 1]], [[-1, 0, 0], [0, -1, 0]]],
            // X_2 = W_2 + (A, D), X_3 = W_3 - (A, D)
            [2, 3] => vec![[[1, 0, 0], [0, 0, 1]], [[-1, 0, 0], [0, 0, -1]]],
            // (A + B, C), (-B, D), -(A, C + D)
            [1, 2, 3] => vec![
                [[1, 1, 0], [0, 0, 1]],
                [[0, -1, 0], [0, 0, 1]],
                [[-1, 0, 0], [0, -1, -1]],
            ],
            _ => unreachable!("validated selection"),
        };
        rows.iter()
            .map(|r| FieldMatrix::from_signed_rows(self.field, r))
            .collect()
    }
}
