use std::sync::Arc;

use super::MdsScheme;
use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, PrimeField};
use crate::linrv::{LinearRV, SeedSpace};
use crate::rational::Rational;

/// Each user's stored randomness `Z_k` and its derived variables `Z_k^n`.
///
/// Levels are the contiguous range `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsVariables {
    k: usize,
    block: usize,
    n_max: usize,
    space: Arc<SeedSpace>,
    sources: Vec<LinearRV>,
    // vars[k-1][n-1]
    vars: Vec<Vec<LinearRV>>,
}

impl MdsVariables {
    /// Assemble from explicit variables. `vars[k-1][n-1]` is `Z_k^n`.
    pub fn new(block: usize, sources: Vec<LinearRV>, vars: Vec<Vec<LinearRV>>) -> Result<Self> {
        let k = sources.len();
        if k == 0 || vars.len() != k {
            return Err(Error::InvalidParams(
                "need one source and variable list per user".into(),
            ));
        }
        let n_max = vars[0].len();
        if vars.iter().any(|v| v.len() != n_max) || n_max == 0 {
            return Err(Error::InvalidParams("every user needs the same levels".into()));
        }
        let space = Arc::clone(sources[0].space());
        let all = sources.iter().chain(vars.iter().flatten());
        if all.clone().any(|v| **v.space() != *space) {
            return Err(Error::MixedSeedSpaces);
        }
        if let Some(bad) = vars.iter().flatten().find(|v| v.len() != block) {
            return Err(Error::LengthMismatch {
                expected: block,
                found: bad.len(),
            });
        }
        Ok(Self {
            k,
            block,
            n_max,
            space,
            sources,
            vars,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Symbols per generated variable (`L`).
    pub fn block(&self) -> usize {
        self.block
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n_max
    }

    pub fn field(&self) -> PrimeField {
        self.space.field()
    }

    pub fn space(&self) -> &Arc<SeedSpace> {
        &self.space
    }

    pub fn source(&self, k: usize) -> &LinearRV {
        &self.sources[k - 1]
    }

    pub fn sources(&self) -> &[LinearRV] {
        &self.sources
    }

    pub fn has_level(&self, n: usize) -> bool {
        (1..=self.n_max).contains(&n)
    }

    pub fn variable(&self, k: usize, n: usize) -> Result<&LinearRV> {
        if !self.has_level(n) {
            return Err(Error::MissingLevel(n));
        }
        self.check_user(k)?;
        Ok(&self.vars[k - 1][n - 1])
    }

    /// `Z_k^{<=n}`: the variables of levels `1..=n` stacked.
    pub fn cumulative(&self, k: usize, n: usize) -> Result<LinearRV> {
        if !self.has_level(n) {
            return Err(Error::MissingLevel(n));
        }
        self.check_user(k)?;
        let parts: Vec<&LinearRV> = self.vars[k - 1][..n].iter().collect();
        LinearRV::stack(format!("Z_{k}^(<={n})"), &parts)
    }

    /// `L_Z / L`: rows of each source over the block length.
    pub fn rate(&self) -> Rational {
        Rational::new(self.sources[0].len() as i64, self.block as i64)
    }

    /// Swap in a different `Z_k^n`, for building deliberately broken inputs.
    pub fn replace_variable(&mut self, k: usize, n: usize, var: LinearRV) -> Result<()> {
        self.variable(k, n)?;
        if **var.space() != *self.space {
            return Err(Error::MixedSeedSpaces);
        }
        if var.len() != self.block {
            return Err(Error::LengthMismatch {
                expected: self.block,
                found: var.len(),
            });
        }
        self.vars[k - 1][n - 1] = var;
        Ok(())
    }

    pub(crate) fn check_user(&self, k: usize) -> Result<()> {
        if (1..=self.k).contains(&k) {
            Ok(())
        } else {
            Err(Error::InvalidSelection(format!("user {k} outside 1..={}", self.k)))
        }
    }
}

/// Lay out the seed `(S^1, .., S^{n_max})`, each `block` symbols, and build
/// `Z_k` and every `Z_k^n` as linear maps on it.
pub fn derive_variables(scheme: &MdsScheme) -> Result<MdsVariables> {
    let p = scheme.params();
    let (field, block) = (p.field(), p.block());
    let space = SeedSpace::new(field, p.levels().iter().map(|n| (format!("S^{n}"), block)))?;
    let seg = |n: usize| format!("S^{n}");

    let mut sources = Vec::with_capacity(p.k());
    let mut vars = Vec::with_capacity(p.k());
    for k in 1..=p.k() {
        let mut rows = Vec::new();
        for &n in p.levels() {
            let part = LinearRV::from_segments("", &space, block / n, &[(&seg(n), scheme.h(k, n))])?;
            rows.push(part);
        }
        let refs: Vec<&LinearRV> = rows.iter().collect();
        sources.push(LinearRV::stack(format!("Z_{k}"), &refs)?);

        let mut per_level = Vec::new();
        for &n in p.levels() {
            let mut pieces: Vec<LinearRV> = Vec::with_capacity(n);
            for m in 1..n {
                let vh: FieldMatrix = scheme.v(k, n, m).mat_mul(scheme.h(k, m))?;
                pieces.push(LinearRV::from_segments("", &space, block / n, &[(&seg(m), &vh)])?);
            }
            pieces.push(rows[n - 1].clone());
            let refs: Vec<&LinearRV> = pieces.iter().collect();
            per_level.push(LinearRV::stack(format!("Z_{k}^{n}"), &refs)?);
        }
        vars.push(per_level);
    }
    MdsVariables::new(block, sources, vars)
}
