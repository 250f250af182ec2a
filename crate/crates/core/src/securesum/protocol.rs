use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{validate_selection, KeyScheme};
use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, PrimeField};
use crate::report::Check;

/// One execution of the protocol for a selected set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionRun {
    pub users: Vec<usize>,
    pub inputs: Vec<Vec<u64>>,
    /// `G_u`, in the same order as `users`.
    pub masks: Vec<FieldMatrix>,
    pub messages: Vec<Vec<u64>>,
    pub decoded: Vec<u64>,
}

impl SelectionRun {
    /// `sum_u W_u` computed directly from the inputs.
    pub fn true_sum(&self, field: PrimeField) -> Vec<u64> {
        sum_vectors(field, self.inputs.iter().map(Vec::as_slice), self.decoded.len())
    }

    pub fn is_correct(&self, field: PrimeField) -> bool {
        self.decoded == self.true_sum(field)
    }
}

fn sum_vectors<'a>(field: PrimeField, vs: impl Iterator<Item = &'a [u64]>, len: usize) -> Vec<u64> {
    let mut acc = vec![0; len];
    for v in vs {
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = field.add(*a, x);
        }
    }
    acc
}

/// `X_u = W_u + G_u Z_u` with the sampled key of user `u`.
pub fn encode<S: KeyScheme + ?Sized>(keys: &S, u: usize, mask_map: &FieldMatrix, w: &[u64]) -> Result<Vec<u64>> {
    validate_selection(&[u], keys.user_count())?;
    if w.len() != keys.input_len() {
        return Err(Error::LengthMismatch {
            expected: keys.input_len(),
            found: w.len(),
        });
    }
    if mask_map.shape() != (keys.input_len(), keys.key_len()) {
        return Err(Error::DimensionMismatch {
            op: "encode",
            left: mask_map.shape(),
            right: (keys.input_len(), keys.key_len()),
        });
    }
    let mask = mask_map.mul_vec(keys.key_value(u))?;
    let field = keys.field();
    Ok(w.iter()
        .zip(mask)
        .map(|(&a, b)| field.add(field.reduce(a), b))
        .collect())
}

/// Sum of the messages from every user in `U`.
pub fn decode(field: PrimeField, users: &[usize], messages: &BTreeMap<usize, Vec<u64>>) -> Result<Vec<u64>> {
    let mut parts = Vec::with_capacity(users.len());
    for u in users {
        let m = messages
            .get(u)
            .ok_or_else(|| Error::InvalidSelection(format!("no message from user {u}")))?;
        parts.push(m.as_slice());
    }
    let len = parts.first().map_or(0, |m| m.len());
    if let Some(bad) = parts.iter().find(|m| m.len() != len) {
        return Err(Error::LengthMismatch {
            expected: len,
            found: bad.len(),
        });
    }
    Ok(sum_vectors(field, parts.into_iter(), len))
}

/// A lone selected user sends its input unmasked.
pub fn single_user(w: &[u64]) -> Vec<u64> {
    w.to_vec()
}

/// Encode every selected user's input and decode the sum.
pub fn run_selection<S: KeyScheme + ?Sized>(keys: &S, users: &[usize], inputs: &[Vec<u64>]) -> Result<SelectionRun> {
    validate_selection(users, keys.user_count())?;
    if inputs.len() != users.len() {
        return Err(Error::LengthMismatch {
            expected: users.len(),
            found: inputs.len(),
        });
    }
    let masks = keys.mask_maps(users)?;
    let messages = if users.len() == 1 {
        if inputs[0].len() != keys.input_len() {
            return Err(Error::LengthMismatch {
                expected: keys.input_len(),
                found: inputs[0].len(),
            });
        }
        vec![single_user(&inputs[0])]
    } else {
        users
            .iter()
            .zip(inputs)
            .zip(&masks)
            .map(|((&u, w), g)| encode(keys, u, g, w))
            .collect::<Result<Vec<_>>>()?
    };
    let by_user: BTreeMap<usize, Vec<u64>> = users.iter().copied().zip(messages.iter().cloned()).collect();
    let decoded = decode(keys.field(), users, &by_user)?;
    Ok(SelectionRun {
        users: users.to_vec(),
        inputs: inputs.to_vec(),
        masks,
        messages,
        decoded,
    })
}

/// Serialized record of one run and the checks made on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    #[serde(rename = "K")]
    pub k: usize,
    pub q: u64,
    #[serde(rename = "U")]
    pub users: Vec<usize>,
    pub inputs: Vec<Vec<u64>>,
    pub messages: Vec<Vec<u64>>,
    pub decoded: Vec<u64>,
    pub checks: Vec<Check>,
}

impl Transcript {
    pub fn new<S: KeyScheme + ?Sized>(keys: &S, run: &SelectionRun, checks: Vec<Check>) -> Self {
        Self {
            k: keys.user_count(),
            q: keys.field().modulus(),
            users: run.users.clone(),
            inputs: run.inputs.clone(),
            messages: run.messages.clone(),
            decoded: run.decoded.clone(),
            checks,
        }
    }
}
