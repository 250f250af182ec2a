use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use super::MdsParams;
use crate::error::{Error, Result};
use crate::gf::FieldMatrix;
use crate::rng::seeded;
use crate::subsets::subsets_of_size;

pub const DEFAULT_MAX_ATTEMPTS: usize = 64;

/// Identifies a condition matrix: the `H` stack at level `n` for users `U`
/// (`m = None`), or the stack of `V^{n<-m} H^m` (`m = Some(m)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionLabel {
    pub n: usize,
    pub m: Option<usize>,
    pub users: Vec<usize>,
}

impl fmt::Display for ConditionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let users: Vec<String> = self.users.iter().map(usize::to_string).collect();
        match self.m {
            None => write!(f, "H(n={}, U={{{}}})", self.n, users.join(",")),
            Some(m) => write!(f, "VH(n={}, m={}, U={{{}}})", self.n, m, users.join(",")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionMatrix {
    pub label: ConditionLabel,
    pub matrix: FieldMatrix,
}

/// Generator matrices `H_k^n` and `V_k^{n<-m}` for every user and level.
///
/// Users and levels are 1-based in every accessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsScheme {
    params: MdsParams,
    // h[k-1][n-1]
    h: Vec<Vec<FieldMatrix>>,
    // v[k-1][n-1][m-1], m < n
    v: Vec<Vec<Vec<FieldMatrix>>>,
    seed: Option<u64>,
    certified: bool,
}

impl MdsScheme {
    /// Assemble a scheme from explicit matrices without certifying it.
    pub fn from_parts(params: MdsParams, h: Vec<Vec<FieldMatrix>>, v: Vec<Vec<Vec<FieldMatrix>>>) -> Result<Self> {
        let (k, n_max, block) = (params.k(), params.n_max(), params.block());
        let bad = |what: String| Err(Error::InvalidParams(what));
        if h.len() != k || v.len() != k {
            return bad(format!("expected matrices for {k} users"));
        }
        for user in 0..k {
            if h[user].len() != n_max || v[user].len() != n_max {
                return bad(format!("user {} needs {n_max} levels", user + 1));
            }
            for n in 1..=n_max {
                let hm = &h[user][n - 1];
                check_shape(&params, hm, (block / n, block), || format!("H[{},{n}]", user + 1))?;
                if v[user][n - 1].len() != n - 1 {
                    return bad(format!("user {} level {n} needs {} V matrices", user + 1, n - 1));
                }
                for m in 1..n {
                    let vm = &v[user][n - 1][m - 1];
                    check_shape(&params, vm, (block / n, block / m), || {
                        format!("V[{},{n}<-{m}]", user + 1)
                    })?;
                }
            }
        }
        Ok(Self {
            params,
            h,
            v,
            seed: None,
            certified: false,
        })
    }

    pub fn params(&self) -> &MdsParams {
        &self.params
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn set_seed(&mut self, seed: Option<u64>) {
        self.seed = seed;
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn h(&self, k: usize, n: usize) -> &FieldMatrix {
        &self.h[k - 1][n - 1]
    }

    pub fn v(&self, k: usize, n: usize, m: usize) -> &FieldMatrix {
        assert!(m < n, "V^{{n<-m}} needs m < n");
        &self.v[k - 1][n - 1][m - 1]
    }

    /// Replace `H_k^n`; the scheme becomes uncertified.
    pub fn set_h(&mut self, k: usize, n: usize, matrix: FieldMatrix) -> Result<()> {
        let b = self.params.block();
        check_shape(&self.params, &matrix, (b / n, b), || format!("H[{k},{n}]"))?;
        self.h[k - 1][n - 1] = matrix;
        self.certified = false;
        Ok(())
    }

    /// Replace `V_k^{n<-m}`; the scheme becomes uncertified.
    pub fn set_v(&mut self, k: usize, n: usize, m: usize, matrix: FieldMatrix) -> Result<()> {
        let b = self.params.block();
        check_shape(&self.params, &matrix, (b / n, b / m), || format!("V[{k},{n}<-{m}]"))?;
        self.v[k - 1][n - 1][m - 1] = matrix;
        self.certified = false;
        Ok(())
    }

    /// Every condition matrix, ordered by level, then `m` (H stack first),
    /// then user set.
    pub fn condition_matrices(&self) -> Vec<ConditionMatrix> {
        let p = &self.params;
        let (field, block) = (p.field(), p.block());
        let mut out = Vec::new();
        for &n in p.levels() {
            for users in subsets_of_size(p.k(), n) {
                let hs: Vec<&FieldMatrix> = users.iter().map(|&k| self.h(k, n)).collect();
                out.push(ConditionMatrix {
                    label: ConditionLabel {
                        n,
                        m: None,
                        users: users.clone(),
                    },
                    matrix: FieldMatrix::vstack(field, block, &hs).expect("shapes checked"),
                });
                for m in 1..n {
                    let parts: Vec<FieldMatrix> = users
                        .iter()
                        .map(|&k| self.v(k, n, m).mat_mul(self.h(k, m)).expect("shapes checked"))
                        .collect();
                    let refs: Vec<&FieldMatrix> = parts.iter().collect();
                    out.push(ConditionMatrix {
                        label: ConditionLabel {
                            n,
                            m: Some(m),
                            users: users.clone(),
                        },
                        matrix: FieldMatrix::vstack(field, block, &refs).expect("shapes checked"),
                    });
                }
            }
        }
        out
    }

    /// First (in enumeration order) rank-deficient condition matrix.
    pub fn first_failure(&self) -> Option<ConditionLabel> {
        let block = self.params.block();
        self.condition_matrices()
            .into_par_iter()
            .find_first(|c| c.matrix.rank() < block)
            .map(|c| c.label)
    }

    /// Check every condition matrix; on success the scheme is marked certified.
    pub fn certify(&mut self) -> Result<()> {
        match self.first_failure() {
            Some(label) => {
                self.certified = false;
                Err(Error::CertificationFailed {
                    label: label.to_string(),
                })
            }
            None => {
                self.certified = true;
                Ok(())
            }
        }
    }
}

fn check_shape(
    params: &MdsParams,
    m: &FieldMatrix,
    shape: (usize, usize),
    name: impl FnOnce() -> String,
) -> Result<()> {
    if m.field() != params.field() {
        return Err(Error::ModulusMismatch {
            left: params.q(),
            right: m.field().modulus(),
        });
    }
    if m.shape() != shape {
        return Err(Error::InvalidParams(format!(
            "{} has shape {:?}, expected {:?}",
            name(),
            m.shape(),
            shape
        )));
    }
    Ok(())
}

fn draw<R: Rng + ?Sized>(params: &MdsParams, rng: &mut R) -> MdsScheme {
    let (field, block) = (params.field(), params.block());
    let mut h = Vec::with_capacity(params.k());
    let mut v = Vec::with_capacity(params.k());
    for _ in 0..params.k() {
        let mut hk = Vec::new();
        let mut vk = Vec::new();
        for &n in params.levels() {
            hk.push(FieldMatrix::random(rng, block / n, block, field));
            vk.push(
                (1..n)
                    .map(|m| FieldMatrix::random(rng, block / n, block / m, field))
                    .collect(),
            );
        }
        h.push(hk);
        v.push(vk);
    }
    MdsScheme::from_parts(params.clone(), h, v).expect("drawn with correct shapes")
}

/// Draw all generator entries uniformly and keep the first draw whose
/// condition matrices are all invertible.
pub fn sample_scheme<R: Rng + ?Sized>(params: &MdsParams, rng: &mut R, max_attempts: usize) -> Result<MdsScheme> {
    let mut first_failure = String::from("none");
    for attempt in 0..max_attempts {
        let mut scheme = draw(params, rng);
        match scheme.first_failure() {
            None => {
                scheme.certified = true;
                return Ok(scheme);
            }
            Some(label) if attempt == 0 => first_failure = label.to_string(),
            Some(_) => {}
        }
    }
    Err(Error::SamplingExhausted {
        attempts: max_attempts,
        first_failure,
    })
}

/// [`sample_scheme`] driven by a fresh generator seeded with `seed`.
pub fn generate(params: &MdsParams, seed: u64, max_attempts: usize) -> Result<MdsScheme> {
    let mut scheme = sample_scheme(params, &mut seeded(seed), max_attempts)?;
    scheme.seed = Some(seed);
    Ok(scheme)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_conditions() {
        let params = MdsParams::full(3, 10007).unwrap();
        let scheme = generate(&params, 7, DEFAULT_MAX_ATTEMPTS).unwrap();
        assert!(scheme.is_certified());
        let conds = scheme.condition_matrices();
        assert_eq!(conds.len(), 12);
        assert!(conds.iter().all(|c| c.matrix.shape() == (6, 6) && c.matrix.rank() == 6));
        assert_eq!(conds[0].label.to_string(), "H(n=1, U={1})");
        assert_eq!(conds.last().unwrap().label.to_string(), "VH(n=3, m=2, U={1,2,3})");
    }

    #[test]
    fn k1_single_condition() {
        let params = MdsParams::full(1, 2).unwrap();
        let scheme = generate(&params, 0, DEFAULT_MAX_ATTEMPTS).unwrap();
        let conds = scheme.condition_matrices();
        assert_eq!(conds.len(), 1);
        assert_eq!(
            conds[0].label,
            ConditionLabel {
                n: 1,
                m: None,
                users: vec![1]
            }
        );
        assert_eq!(scheme.h(1, 1).to_rows(), vec![vec![1]]);
    }

    #[test]
    fn minimal_field_is_usable() {
        let params = MdsParams::full(3, 73).unwrap();
        let scheme = generate(&params, 1, 256).unwrap();
        assert!(scheme.is_certified());
    }

    #[test]
    fn same_seed_same_scheme() {
        let params = MdsParams::full(3, 10007).unwrap();
        let a = generate(&params, 11, 8).unwrap();
        let b = generate(&params, 11, 8).unwrap();
        let c = generate(&params, 12, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn mutation_breaks_certification() {
        let params = MdsParams::full(3, 10007).unwrap();
        let mut scheme = generate(&params, 5, 8).unwrap();
        let mut h = scheme.h(2, 2).clone();
        for c in 0..h.cols() {
            h.set(1, c, 0);
        }
        scheme.set_h(2, 2, h).unwrap();
        assert!(!scheme.is_certified());
        assert_eq!(
            scheme.certify(),
            Err(Error::CertificationFailed {
                label: "H(n=2, U={1,2})".into()
            })
        );
        assert!(scheme.set_h(1, 1, FieldMatrix::identity(params.field(), 5)).is_err());
    }

    #[test]
    fn exhaustion_reports_attempts() {
        let params = MdsParams::full(2, 11).unwrap();
        match sample_scheme(&params, &mut seeded(0), 0) {
            Err(Error::SamplingExhausted { attempts: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
