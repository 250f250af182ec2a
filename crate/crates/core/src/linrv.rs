//! Entropy calculus for random variables that are linear images of one shared
//! uniform seed vector over GF(q).
//!
//! If `S` is uniform on `GF(q)^d` and `Z = M S`, then `H(Z) = rank(M) log2 q`.
//! Joint entropies are ranks of vertically stacked maps, so every entropy and
//! (conditional) mutual information among such variables is an exact integer
//! number of field symbols. [`brute_force_entropy`] computes the same quantity
//! by enumerating the seed space and is kept as an independent oracle.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, PrimeField};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::report::Check;

/// Maximum number of seed states [`brute_force_entropy`] will enumerate.
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub label: String,
    pub start: usize,
    pub len: usize,
}

impl Segment {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// The index set of the shared seed, split into named consecutive segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSpace {
    field: PrimeField,
    dim: usize,
    segments: Vec<Segment>,
}

impl SeedSpace {
    /// Lay out segments back to back in the given order.
    pub fn new<S: Into<String>>(
        field: PrimeField,
        segments: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Arc<Self>> {
        let mut out: Vec<Segment> = Vec::new();
        let mut start = 0;
        for (label, len) in segments {
            let label = label.into();
            if out.iter().any(|s| s.label == label) {
                return Err(Error::InvalidSeedSpace(format!("duplicate segment {label:?}")));
            }
            out.push(Segment { label, start, len });
            start += len;
        }
        Ok(Arc::new(Self {
            field,
            dim: start,
            segments: out,
        }))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, label: &str) -> Result<&Segment> {
        self.segments
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| Error::InvalidSeedSpace(format!("no segment {label:?}")))
    }
}

/// Entropy in field symbols (units of `log2 q`); exact and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntropyValue(Rational);

impl EntropyValue {
    pub fn zero() -> Self {
        Self(Rational::zero())
    }

    pub fn symbols(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        assert!(r >= Rational::zero(), "entropy must be non-negative, got {r}");
        Self(r)
    }

    pub fn as_rational(self) -> Rational {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// Value in bits for a field of size `q`.
    pub fn bits(self, q: u64) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) * (q as f64).log2()
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl Serialize for EntropyValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for EntropyValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        match parse_rational(&s) {
            Some(r) if r >= Rational::zero() => Ok(Self(r)),
            _ => Err(D::Error::custom(format!("invalid entropy value {s:?}"))),
        }
    }
}

/// A named random variable `Z = map * S` over a shared seed space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRV {
    label: String,
    map: FieldMatrix,
    space: Arc<SeedSpace>,
}

impl LinearRV {
    pub fn new(label: impl Into<String>, map: FieldMatrix, space: &Arc<SeedSpace>) -> Result<Self> {
        if map.field() != space.field() {
            return Err(Error::ModulusMismatch {
                left: map.field().modulus(),
                right: space.field().modulus(),
            });
        }
        if map.cols() != space.dim() {
            return Err(Error::DimensionMismatch {
                op: "LinearRV::new",
                left: map.shape(),
                right: (map.rows(), space.dim()),
            });
        }
        Ok(Self {
            label: label.into(),
            map,
            space: Arc::clone(space),
        })
    }

    /// Variable built from per-segment blocks: `Z = sum_i block_i * S[segment_i]`.
    /// All blocks must have the same number of rows.
    pub fn from_segments(
        label: impl Into<String>,
        space: &Arc<SeedSpace>,
        rows: usize,
        blocks: &[(&str, &FieldMatrix)],
    ) -> Result<Self> {
        let mut map = FieldMatrix::zeros(space.field(), rows, space.dim());
        for (seg, block) in blocks {
            let seg = space.segment(seg)?;
            if block.shape() != (rows, seg.len) {
                return Err(Error::DimensionMismatch {
                    op: "LinearRV::from_segments",
                    left: block.shape(),
                    right: (rows, seg.len),
                });
            }
            let mut current = map.block(0, seg.start, rows, seg.len);
            current = current.add(block)?;
            map.place(0, seg.start, &current)?;
        }
        Self::new(label, map, space)
    }

    /// Several variables stacked into one vector-valued variable.
    pub fn stack(label: impl Into<String>, parts: &[&LinearRV]) -> Result<Self> {
        let space = common_space(parts)?
            .ok_or_else(|| Error::InvalidSeedSpace("cannot stack an empty list without a seed space".into()))?;
        let maps: Vec<&FieldMatrix> = parts.iter().map(|v| &v.map).collect();
        let map = FieldMatrix::vstack(space.field(), space.dim(), &maps)?;
        Self::new(label, map, &space)
    }

    /// The variable `G * Z` for a coefficient matrix `G`.
    pub fn transform(&self, label: impl Into<String>, coefficients: &FieldMatrix) -> Result<Self> {
        Self::new(label, coefficients.mat_mul(&self.map)?, &self.space)
    }

    /// The same variable expressed over a larger space whose columns
    /// `[offset, offset + dim)` hold this variable's seed.
    pub fn embed(&self, space: &Arc<SeedSpace>, offset: usize) -> Result<Self> {
        let mut map = FieldMatrix::zeros(space.field(), self.map.rows(), space.dim());
        map.place(0, offset, &self.map)?;
        Self::new(self.label.clone(), map, space)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn map(&self) -> &FieldMatrix {
        &self.map
    }

    pub fn space(&self) -> &Arc<SeedSpace> {
        &self.space
    }

    /// Output length in symbols.
    pub fn len(&self) -> usize {
        self.map.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.map.rows() == 0
    }

    /// Realize the variable for a concrete seed vector.
    pub fn evaluate(&self, seed: &[u64]) -> Result<Vec<u64>> {
        self.map.mul_vec(seed)
    }
}

fn same_space(a: &Arc<SeedSpace>, b: &Arc<SeedSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn common_space(vars: &[&LinearRV]) -> Result<Option<Arc<SeedSpace>>> {
    let Some(first) = vars.first() else {
        return Ok(None);
    };
    if vars.iter().any(|v| !same_space(&v.space, &first.space)) {
        return Err(Error::MixedSeedSpaces);
    }
    Ok(Some(Arc::clone(&first.space)))
}

fn joint_rank(vars: &[&LinearRV]) -> Result<usize> {
    let Some(space) = common_space(vars)? else {
        return Ok(0);
    };
    let maps: Vec<&FieldMatrix> = vars.iter().map(|v| &v.map).collect();
    Ok(FieldMatrix::vstack(space.field(), space.dim(), &maps)?.rank())
}

/// Joint entropy of a set of variables, in symbols.
pub fn entropy(vars: &[&LinearRV]) -> Result<EntropyValue> {
    Ok(EntropyValue::symbols(joint_rank(vars)? as i64))
}

/// `I(A; B | C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)`, in symbols.
pub fn conditional_mutual_information(a: &[&LinearRV], b: &[&LinearRV], c: &[&LinearRV]) -> Result<EntropyValue> {
    let all: Vec<&LinearRV> = a.iter().chain(b).chain(c).copied().collect();
    common_space(&all)?;
    let ac: Vec<&LinearRV> = a.iter().chain(c).copied().collect();
    let bc: Vec<&LinearRV> = b.iter().chain(c).copied().collect();
    let value = joint_rank(&ac)? as i64 + joint_rank(&bc)? as i64 - joint_rank(&all)? as i64 - joint_rank(c)? as i64;
    debug_assert!(value >= 0, "submodularity violated");
    Ok(EntropyValue::symbols(value))
}

pub fn mutual_information(a: &[&LinearRV], b: &[&LinearRV]) -> Result<EntropyValue> {
    conditional_mutual_information(a, b, &[])
}

/// `H(A | C) = H(A, C) - H(C)`, in symbols.
pub fn conditional_entropy(a: &[&LinearRV], c: &[&LinearRV]) -> Result<EntropyValue> {
    let ac: Vec<&LinearRV> = a.iter().chain(c).copied().collect();
    common_space(&ac)?;
    Ok(EntropyValue::symbols(joint_rank(&ac)? as i64 - joint_rank(c)? as i64))
}

/// Shannon entropy in bits of the joint output distribution, computed by
/// enumerating every seed in `GF(q)^dim`. Does not use any rank computation.
pub fn brute_force_entropy(vars: &[&LinearRV]) -> Result<f64> {
    let Some(space) = common_space(vars)? else {
        return Ok(0.0);
    };
    let q = space.field().modulus();
    let dim = space.dim();
    let states = (q as u128).checked_pow(dim as u32);
    match states {
        Some(n) if n <= ENUMERATION_BUDGET as u128 => {}
        _ => {
            return Err(Error::EnumerationBudget {
                required: states.map_or_else(|| format!("{q}^{dim}"), |n| n.to_string()),
                budget: ENUMERATION_BUDGET,
            })
        }
    }

    // Column j of the stacked map, as a list of per-row coefficients.
    let rows: Vec<&[u64]> = vars
        .iter()
        .flat_map(|v| (0..v.map.rows()).map(move |r| v.map.row(r)))
        .collect();
    let r = rows.len();
    let columns: Vec<Vec<u64>> = (0..dim).map(|j| rows.iter().map(|row| row[j]).collect()).collect();

    let packable = (r as f64) * (q as f64).log2() < 127.0;
    let mut packed: HashMap<u128, u64> = HashMap::new();
    let mut unpacked: HashMap<Vec<u64>, u64> = HashMap::new();

    let mut digits = vec![0u64; dim];
    let mut out = vec![0u64; r];
    let mut total = 0u64;
    loop {
        total += 1;
        if packable {
            let key = out.iter().fold(0u128, |acc, &v| acc * q as u128 + v as u128);
            *packed.entry(key).or_default() += 1;
        } else {
            *unpacked.entry(out.clone()).or_default() += 1;
        }
        // Odometer step over the seed, updating the output incrementally.
        let mut j = 0;
        loop {
            if j == dim {
                break;
            }
            if digits[j] + 1 < q {
                digits[j] += 1;
                for (o, &c) in out.iter_mut().zip(&columns[j]) {
                    *o = (*o + c) % q;
                }
                break;
            }
            // Wrapping q-1 -> 0 subtracts (q-1)c, which is +c mod q.
            digits[j] = 0;
            for (o, &c) in out.iter_mut().zip(&columns[j]) {
                *o = (*o + c) % q;
            }
            j += 1;
        }
        if j == dim {
            break;
        }
    }

    let n = total as f64;
    // Sorted so the floating-point sum does not depend on hash order.
    let mut counts: Vec<u64> = if packable {
        packed.into_values().collect()
    } else {
        unpacked.into_values().collect()
    };
    counts.sort_unstable();
    Ok(counts
        .into_iter()
        .map(|c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0))
}

/// The same variables over a space holding only `segment`. Fails if any of
/// them reads seed symbols outside it. Entropies are unchanged, and the
/// smaller space can make brute-force enumeration affordable.
pub fn restrict_to_segment(vars: &[&LinearRV], segment: &str) -> Result<Vec<LinearRV>> {
    let Some(space) = common_space(vars)? else {
        return Ok(Vec::new());
    };
    let seg = space.segment(segment)?.clone();
    let inside: Vec<usize> = seg.range().collect();
    let outside: Vec<usize> = (0..space.dim()).filter(|j| !seg.range().contains(j)).collect();
    let small = SeedSpace::new(space.field(), [(seg.label.clone(), seg.len)])?;
    vars.iter()
        .map(|v| {
            if !v.map.select_cols(&outside).is_zero() {
                return Err(Error::InvalidSeedSpace(format!(
                    "{} depends on seed symbols outside {segment}",
                    v.label
                )));
            }
            LinearRV::new(v.label.clone(), v.map.select_cols(&inside), &small)
        })
        .collect()
}

/// Check `sum_i H(Z_i) = H(Z_1..Z_n) + sum_{i>=2} I(Z_i; Z_1..Z_{i-1})`.
pub fn check_chain_identity(vars: &[&LinearRV]) -> Result<Check> {
    common_space(vars)?;
    let mut lhs = 0i64;
    for v in vars {
        lhs += joint_rank(&[v])? as i64;
    }
    let mut rhs = joint_rank(vars)? as i64;
    for i in 1..vars.len() {
        rhs += mutual_information(&[vars[i]], &vars[..i])?.as_rational().to_integer();
    }
    Ok(Check::eq(
        format!("chain identity over {} variables", vars.len()),
        EntropyValue::symbols(lhs),
        EntropyValue::symbols(rhs),
    ))
}
