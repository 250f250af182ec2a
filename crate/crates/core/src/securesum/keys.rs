use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{validate_selection, KeyScheme, SummationParams};
use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, PrimeField};
use crate::linrv::{LinearRV, SeedSpace};
use crate::mdsgen::{derive_variables, sample_scheme, MdsScheme, MdsVariables, SchemeDocument};
use crate::mdsverify::set_label;

/// Keys built from an MDS scheme on levels `1..=K-1`, plus one sampled seed.
///
/// `Z_k` is the scheme's source variable; for a selection of size `n + 1`
/// user `u` masks with `F_u Z_u^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    params: SummationParams,
    scheme: MdsScheme,
    vars: MdsVariables,
    seed_values: Vec<u64>,
    z_values: Vec<Vec<u64>>,
}

impl KeyMaterial {
    /// Sample a certified scheme, then the seed, from one generator.
    pub fn setup<R: Rng + ?Sized>(params: &SummationParams, rng: &mut R, max_attempts: usize) -> Result<Self> {
        let scheme = sample_scheme(params.mds_params(), rng, max_attempts)?;
        let dim = params.input_len() * (params.k() - 1);
        let seed = FieldMatrix::random(rng, 1, dim, scheme.params().field());
        Self::from_scheme(scheme, seed.row(0).to_vec())
    }

    /// Wrap any scheme with summation-shaped parameters. The scheme is used
    /// as is, certified or not.
    pub fn from_scheme(scheme: MdsScheme, seed_values: Vec<u64>) -> Result<Self> {
        let p = scheme.params();
        let params = SummationParams::new(p.k(), p.q())?;
        if params.mds_params() != p {
            return Err(Error::InvalidParams(format!(
                "summation keys need levels 1..={} and block {}",
                p.k() - 1,
                params.input_len()
            )));
        }
        let vars = derive_variables(&scheme)?;
        if seed_values.len() != vars.space().dim() {
            return Err(Error::LengthMismatch {
                expected: vars.space().dim(),
                found: seed_values.len(),
            });
        }
        if seed_values.iter().any(|&x| x >= p.q()) {
            return Err(Error::Format(format!("seed entry not reduced mod {}", p.q())));
        }
        let z_values = vars
            .sources()
            .iter()
            .map(|z| z.evaluate(&seed_values))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            scheme,
            vars,
            seed_values,
            z_values,
        })
    }

    pub fn params(&self) -> &SummationParams {
        &self.params
    }

    pub fn scheme(&self) -> &MdsScheme {
        &self.scheme
    }

    pub fn variables(&self) -> &MdsVariables {
        &self.vars
    }

    pub fn seed_values(&self) -> &[u64] {
        &self.seed_values
    }

    /// `T_u^n` with `Z_u^n = T_u^n Z_u`: `V^{n<-m}` on the level-`m` block for
    /// `m < n` and the identity on the level-`n` block.
    pub fn transform(&self, u: usize, n: usize) -> Result<FieldMatrix> {
        self.vars.variable(u, n)?;
        let block = self.params.input_len();
        let offset = |m: usize| (1..m).map(|j| block / j).sum::<usize>();
        let mut t = FieldMatrix::zeros(self.field(), block, self.key_len());
        let rows = block / n;
        for m in 1..n {
            t.place((m - 1) * rows, offset(m), self.scheme.v(u, n, m))?;
        }
        t.place((n - 1) * rows, offset(n), &FieldMatrix::identity(self.field(), rows))?;
        Ok(t)
    }

    /// Coefficients `F_u` with `sum_u F_u Z_u^n = 0`, `n = |U| - 1`; see
    /// [`annihilating_coefficients`]. Full rank of each `F_u` is not required.
    pub fn solve_annihilator(&self, users: &[usize]) -> Result<Vec<FieldMatrix>> {
        validate_selection(users, self.user_count())?;
        if users.len() < 2 {
            return Err(Error::InvalidSelection("mask coefficients need |U| >= 2".into()));
        }
        annihilating_coefficients(&self.vars, users, users.len() - 1)
    }

    /// [`Self::solve_annihilator`] plus a full-rank check of every `F_u`.
    pub fn mask_coefficients(&self, users: &[usize]) -> Result<Vec<FieldMatrix>> {
        let fs = self.solve_annihilator(users)?;
        for (f, &u) in fs.iter().zip(users) {
            let rank = f.rank();
            if rank < f.rows() {
                return Err(Error::MaskNotFullRank {
                    user: u,
                    rank,
                    size: f.rows(),
                });
            }
        }
        Ok(fs)
    }

    fn maps_from(&self, users: &[usize], fs: Vec<FieldMatrix>) -> Result<Vec<FieldMatrix>> {
        let n = users.len() - 1;
        fs.iter()
            .zip(users)
            .map(|(f, &u)| f.mat_mul(&self.transform(u, n)?))
            .collect()
    }

    pub fn to_document(&self) -> KeyDocument {
        KeyDocument {
            scheme: SchemeDocument::from_scheme(&self.scheme),
            sampled_seed: self.seed_values.clone(),
        }
    }

    /// Load keys; the scheme is certified on the way in.
    pub fn from_document(doc: &KeyDocument) -> Result<Self> {
        Self::from_scheme(doc.scheme.to_scheme()?, doc.sampled_seed.clone())
    }
}

impl KeyScheme for KeyMaterial {
    fn user_count(&self) -> usize {
        self.params.k()
    }

    fn field(&self) -> PrimeField {
        self.vars.field()
    }

    fn input_len(&self) -> usize {
        self.params.input_len()
    }

    fn key_len(&self) -> usize {
        self.vars.source(1).len()
    }

    fn key_space(&self) -> &Arc<SeedSpace> {
        self.vars.space()
    }

    fn key_variable(&self, u: usize) -> &LinearRV {
        self.vars.source(u)
    }

    fn key_value(&self, u: usize) -> &[u64] {
        &self.z_values[u - 1]
    }

    fn mask_maps_unchecked(&self, users: &[usize]) -> Result<Vec<FieldMatrix>> {
        validate_selection(users, self.user_count())?;
        if users.len() == 1 {
            return Ok(vec![FieldMatrix::zeros(self.field(), self.input_len(), self.key_len())]);
        }
        self.maps_from(users, self.solve_annihilator(users)?)
    }

    fn mask_maps(&self, users: &[usize]) -> Result<Vec<FieldMatrix>> {
        validate_selection(users, self.user_count())?;
        if users.len() == 1 {
            return self.mask_maps_unchecked(users);
        }
        self.maps_from(users, self.mask_coefficients(users)?)
    }
}

/// Square coefficients `F_u`, one per user of `U` in order, with
/// `sum_u F_u Z_u^n = 0`. The last user gets `-I`; the others solve a square
/// system restricted to a pivot set of seed coordinates, and the identity is
/// then confirmed on the full maps.
pub fn annihilating_coefficients(vars: &MdsVariables, users: &[usize], n: usize) -> Result<Vec<FieldMatrix>> {
    let (field, block) = (vars.field(), vars.block());
    let maps = users
        .iter()
        .map(|&u| Ok(vars.variable(u, n)?.map()))
        .collect::<Result<Vec<_>>>()?;
    let Some((last, head)) = maps.split_last() else {
        return Err(Error::InvalidSelection("empty selection".into()));
    };
    let stacked = FieldMatrix::vstack(field, vars.space().dim(), head)?;
    let (_, pivots) = stacked.rref();
    if pivots.len() < stacked.rows() {
        return Err(Error::Singular {
            rank: pivots.len(),
            size: stacked.rows(),
        });
    }
    let a = stacked.select_cols(&pivots);
    let b = last.select_cols(&pivots);
    let x = a.transpose().solve(&b.transpose())?.transpose();
    if &x.mat_mul(&stacked)? != *last {
        return Err(Error::CertificationFailed {
            label: format!("annihilation U={}", set_label(users)),
        });
    }
    let mut out: Vec<FieldMatrix> = (0..head.len()).map(|i| x.block(0, i * block, block, block)).collect();
    out.push(FieldMatrix::identity(field, block).neg());
    Ok(out)
}

/// Key export: the scheme document plus the sampled seed vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyDocument {
    #[serde(flatten)]
    pub scheme: SchemeDocument,
    pub sampled_seed: Vec<u64>,
}

impl KeyDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}
