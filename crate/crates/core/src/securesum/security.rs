use std::sync::Arc;

use super::{validate_selection, KeyScheme};
use crate::error::Result;
use crate::gf::FieldMatrix;
use crate::linrv::{conditional_entropy, conditional_mutual_information, entropy, EntropyValue, LinearRV, SeedSpace};
use crate::mdsverify::set_label;
use crate::report::{Check, VerifyReport};

/// Inputs and keys over one seed: a segment `W_k` per user followed by the
/// key seed segments. Inputs are independent of keys and of each other.
#[derive(Debug, Clone)]
pub struct JointSpace {
    space: Arc<SeedSpace>,
    inputs: Vec<LinearRV>,
    keys: Vec<LinearRV>,
}

impl JointSpace {
    pub fn new<S: KeyScheme + ?Sized>(keys: &S) -> Result<Self> {
        let (k, l) = (keys.user_count(), keys.input_len());
        let key_space = keys.key_space();
        let segments = (1..=k)
            .map(|u| (format!("W_{u}"), l))
            .chain(key_space.segments().iter().map(|s| (s.label.clone(), s.len)));
        let space = SeedSpace::new(keys.field(), segments)?;
        let eye = FieldMatrix::identity(keys.field(), l);
        let inputs = (1..=k)
            .map(|u| LinearRV::from_segments(format!("W_{u}"), &space, l, &[(&format!("W_{u}"), &eye)]))
            .collect::<Result<Vec<_>>>()?;
        let keys = (1..=k)
            .map(|u| keys.key_variable(u).embed(&space, k * l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { space, inputs, keys })
    }

    pub fn space(&self) -> &Arc<SeedSpace> {
        &self.space
    }

    pub fn input(&self, u: usize) -> &LinearRV {
        &self.inputs[u - 1]
    }

    pub fn key(&self, u: usize) -> &LinearRV {
        &self.keys[u - 1]
    }

    /// `G_u Z_u`.
    pub fn mask(&self, u: usize, g: &FieldMatrix) -> Result<LinearRV> {
        self.key(u).transform(format!("M_{u}"), g)
    }

    /// `X_u = W_u + G_u Z_u`.
    pub fn message(&self, u: usize, g: &FieldMatrix) -> Result<LinearRV> {
        let map = self.input(u).map().add(self.mask(u, g)?.map())?;
        LinearRV::new(format!("X_{u}"), map, &self.space)
    }

    /// Componentwise sum of equally long variables.
    pub fn sum(&self, label: &str, vars: &[&LinearRV]) -> Result<LinearRV> {
        let rows = vars.first().map_or(0, |v| v.len());
        let mut map = FieldMatrix::zeros(self.space.field(), rows, self.space.dim());
        for v in vars {
            map = map.add(v.map())?;
        }
        LinearRV::new(label, map, &self.space)
    }
}

/// Exact leakage `I((W_u)_U; (X_u)_U | sum W_u)` and the accompanying
/// entropy counts for one selection, evaluated over inputs and keys jointly.
pub fn security_check<S: KeyScheme + ?Sized>(keys: &S, users: &[usize]) -> Result<VerifyReport> {
    validate_selection(users, keys.user_count())?;
    let joint = JointSpace::new(keys)?;
    let maps = keys.mask_maps_unchecked(users)?;
    let n = users.len() - 1;
    let l = keys.input_len();
    let tag = set_label(users);

    let inputs: Vec<&LinearRV> = users.iter().map(|&u| joint.input(u)).collect();
    let messages = users
        .iter()
        .zip(&maps)
        .map(|(&u, g)| joint.message(u, g))
        .collect::<Result<Vec<_>>>()?;
    let masks = users
        .iter()
        .zip(&maps)
        .map(|(&u, g)| joint.mask(u, g))
        .collect::<Result<Vec<_>>>()?;
    let messages: Vec<&LinearRV> = messages.iter().collect();
    let masks: Vec<&LinearRV> = masks.iter().collect();
    let sum_w = joint.sum("sum W", &inputs)?;
    let mask_sum = joint.sum("sum M", &masks)?;
    let nl = EntropyValue::symbols((n * l) as i64);

    Ok([
        Check::eq(
            format!("leakage U={tag}"),
            conditional_mutual_information(&inputs, &messages, &[&sum_w])?,
            EntropyValue::zero(),
        ),
        Check::eq(
            format!("decodability U={tag}"),
            conditional_entropy(&[&sum_w], &messages)?,
            EntropyValue::zero(),
        ),
        Check::eq(
            format!("message entropy given sum U={tag}"),
            conditional_entropy(&messages, &[&sum_w])?,
            nl,
        ),
        Check::eq(format!("mask entropy U={tag}"), entropy(&masks)?, nl),
        Check::eq(
            format!("mask cancellation U={tag}"),
            entropy(&[&mask_sum])?,
            EntropyValue::zero(),
        ),
    ]
    .into_iter()
    .collect())
}
