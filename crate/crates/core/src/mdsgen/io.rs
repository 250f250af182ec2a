use serde::{Deserialize, Serialize};

use super::{MdsParams, MdsScheme};
use crate::error::{Error, Result};
use crate::gf::FieldMatrix;
use crate::rng::RNG_ALGORITHM;

pub const SCHEME_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HEntry {
    pub user: usize,
    pub level: usize,
    pub rows: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VEntry {
    pub user: usize,
    pub level: usize,
    pub from: usize,
    pub rows: Vec<Vec<u64>>,
}

/// On-disk form of a scheme. Certification is never stored; loading
/// re-checks every condition matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDocument {
    pub version: u32,
    #[serde(rename = "K")]
    pub k: usize,
    pub q: u64,
    pub block: usize,
    pub levels: Vec<usize>,
    pub rng: Option<String>,
    pub rng_seed: Option<u64>,
    #[serde(rename = "H")]
    pub h: Vec<HEntry>,
    #[serde(rename = "V")]
    pub v: Vec<VEntry>,
}

impl SchemeDocument {
    pub fn from_scheme(scheme: &MdsScheme) -> Self {
        let p = scheme.params();
        let mut h = Vec::new();
        let mut v = Vec::new();
        for user in 1..=p.k() {
            for &level in p.levels() {
                h.push(HEntry {
                    user,
                    level,
                    rows: scheme.h(user, level).to_rows(),
                });
                for from in 1..level {
                    v.push(VEntry {
                        user,
                        level,
                        from,
                        rows: scheme.v(user, level, from).to_rows(),
                    });
                }
            }
        }
        Self {
            version: SCHEME_FORMAT_VERSION,
            k: p.k(),
            q: p.q(),
            block: p.block(),
            levels: p.levels().to_vec(),
            rng: scheme.seed().map(|_| RNG_ALGORITHM.to_string()),
            rng_seed: scheme.seed(),
            h,
            v,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if doc.version != SCHEME_FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", doc.version)));
        }
        Ok(doc)
    }

    /// Rebuild the matrices without checking the condition matrices.
    pub fn to_scheme_unchecked(&self) -> Result<MdsScheme> {
        let params = MdsParams::new(self.k, self.q, Some(self.levels.clone()), Some(self.block))?;
        let field = params.field();
        let n_max = params.n_max();
        let matrix = |rows: &[Vec<u64>], what: &str| -> Result<FieldMatrix> {
            if rows.iter().flatten().any(|&x| x >= self.q) {
                return Err(Error::Format(format!("{what}: entry not reduced mod {}", self.q)));
            }
            FieldMatrix::from_rows(field, rows).map_err(|e| Error::Format(format!("{what}: {e}")))
        };

        let mut h: Vec<Vec<Option<FieldMatrix>>> = vec![vec![None; n_max]; self.k];
        for e in &self.h {
            let what = format!("H user {} level {}", e.user, e.level);
            let slot = (1..=self.k)
                .contains(&e.user)
                .then(|| h[e.user - 1].get_mut(e.level.wrapping_sub(1)))
                .flatten()
                .ok_or_else(|| Error::Format(format!("{what}: out of range")))?;
            if slot.replace(matrix(&e.rows, &what)?).is_some() {
                return Err(Error::Format(format!("{what}: duplicate entry")));
            }
        }
        let mut v: Vec<Vec<Vec<Option<FieldMatrix>>>> = (0..self.k)
            .map(|_| (1..=n_max).map(|n| vec![None; n - 1]).collect())
            .collect();
        for e in &self.v {
            let what = format!("V user {} level {} from {}", e.user, e.level, e.from);
            let slot = (1..=self.k)
                .contains(&e.user)
                .then(|| v[e.user - 1].get_mut(e.level.wrapping_sub(1)))
                .flatten()
                .and_then(|l| l.get_mut(e.from.wrapping_sub(1)))
                .ok_or_else(|| Error::Format(format!("{what}: out of range")))?;
            if slot.replace(matrix(&e.rows, &what)?).is_some() {
                return Err(Error::Format(format!("{what}: duplicate entry")));
            }
        }

        let missing = |what: String| Error::Format(format!("missing {what}"));
        let h = h
            .into_iter()
            .enumerate()
            .map(|(u, levels)| {
                levels
                    .into_iter()
                    .enumerate()
                    .map(|(n, m)| m.ok_or_else(|| missing(format!("H user {} level {}", u + 1, n + 1))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let v = v
            .into_iter()
            .enumerate()
            .map(|(u, levels)| {
                levels
                    .into_iter()
                    .enumerate()
                    .map(|(n, froms)| {
                        froms
                            .into_iter()
                            .enumerate()
                            .map(|(m, x)| {
                                x.ok_or_else(|| missing(format!("V user {} level {} from {}", u + 1, n + 1, m + 1)))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut scheme = MdsScheme::from_parts(params, h, v).map_err(|e| match e {
            Error::InvalidParams(m) => Error::Format(m),
            other => other,
        })?;
        scheme.set_seed(self.rng_seed);
        Ok(scheme)
    }

    /// Rebuild and certify.
    pub fn to_scheme(&self) -> Result<MdsScheme> {
        let mut scheme = self.to_scheme_unchecked()?;
        scheme.certify()?;
        Ok(scheme)
    }
}

impl MdsScheme {
    pub fn to_json(&self) -> String {
        SchemeDocument::from_scheme(self).to_json()
    }

    /// Parse and certify a scheme document.
    pub fn from_json(text: &str) -> Result<Self> {
        SchemeDocument::from_json(text)?.to_scheme()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdsgen::generate;

    fn scheme() -> MdsScheme {
        generate(&MdsParams::full(3, 10007).unwrap(), 7, 8).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let s = scheme();
        let text = s.to_json();
        let back = MdsScheme::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"rng_seed\": 7"));
        assert!(!text.contains("certified"));
    }

    #[test]
    fn zeroed_row_fails_certification_on_load() {
        let mut doc = SchemeDocument::from_scheme(&scheme());
        let e = doc.h.iter_mut().find(|e| e.user == 3 && e.level == 3).unwrap();
        e.rows[0].iter_mut().for_each(|x| *x = 0);
        let text = doc.to_json();
        match MdsScheme::from_json(&text) {
            Err(Error::CertificationFailed { label }) => assert_eq!(label, "H(n=3, U={1,2,3})"),
            other => panic!("{other:?}"),
        }
        assert!(SchemeDocument::from_json(&text).unwrap().to_scheme_unchecked().is_ok());
    }

    #[test]
    fn malformed_documents_are_format_errors() {
        let text = scheme().to_json();
        let err = MdsScheme::from_json(&text[..text.len() / 2]).unwrap_err();
        assert!(matches!(err, Error::Format(ref m) if m.contains("line")), "{err:?}");

        let mut doc = SchemeDocument::from_scheme(&scheme());
        doc.h.pop();
        assert!(matches!(doc.to_scheme(), Err(Error::Format(_))));

        let mut doc = SchemeDocument::from_scheme(&scheme());
        doc.v[0].rows[0][0] = 10007;
        assert!(matches!(doc.to_scheme(), Err(Error::Format(_))));

        let mut doc = SchemeDocument::from_scheme(&scheme());
        doc.h[1].rows.pop();
        assert!(matches!(doc.to_scheme(), Err(Error::Format(_))));

        let mut doc = SchemeDocument::from_scheme(&scheme());
        doc.version = 9;
        assert!(SchemeDocument::from_json(&doc.to_json()).is_err());
    }
}
