use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus (exclusive). Products of two residues fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// A prime field GF(p) with `p < 2^31`.
///
/// The field is a small `Copy` handle; elements and matrices carry it so that
/// mixing moduli is caught at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..MAX_MODULUS).contains(&modulus) {
            return Err(Error::ModulusOutOfRange(modulus));
        }
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self { modulus })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, value: u64) -> u64 {
        value % self.modulus
    }

    /// Reduce a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce_signed(self, value: i64) -> u64 {
        value.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64> {
        let a = self.reduce(a);
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.modulus as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce_signed(t0))
    }

    pub fn div(self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut base = self.reduce(base);
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(value),
            field: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<PrimeField> for u64 {
    fn from(field: PrimeField) -> u64 {
        field.modulus
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.modulus)
    }
}

/// Deterministic trial division; adequate below 2^31 (at most ~46k divisions).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// An element of a prime field, tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

// Checked ops: operands from different fields are an error, not a panic.
#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Self) -> Result<PrimeField> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch {
                left: self.field.modulus,
                right: other.field.modulus,
            });
        }
        Ok(self.field)
    }

    pub fn add(self, other: Self) -> Result<Self> {
        field_arith(self, other, ArithOp::Add)
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        field_arith(self, other, ArithOp::Sub)
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        field_arith(self, other, ArithOp::Mul)
    }

    pub fn div(self, other: Self) -> Result<Self> {
        field_arith(self, other, ArithOp::Div)
    }

    pub fn neg(self) -> Self {
        self.field.element(self.field.neg(self.value))
    }

    pub fn inv(self) -> Result<Self> {
        Ok(self.field.element(self.field.inv(self.value)?))
    }
}

/// Apply one of the four field operations to two elements of the same field.
pub fn field_arith(a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement> {
    let f = a.same_field(b)?;
    let value = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.div(a.value, b.value)?,
    };
    Ok(FieldElement { value, field: f })
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = gf(5);
        let two = f5.element(2);
        let three = f5.element(3);
        assert_eq!(field_arith(two, three, ArithOp::Div).unwrap().value(), 4);
        assert_eq!(field_arith(f5.element(4), three, ArithOp::Add).unwrap().value(), 2);
        let f73 = gf(73);
        let m1 = f73.element(72);
        assert_eq!(m1.mul(m1).unwrap().value(), 1);
        assert_eq!(f5.element(1).sub(three).unwrap().value(), 3);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f5 = gf(5);
        assert_eq!(f5.one().div(f5.zero()), Err(Error::DivisionByZero));
        assert_eq!(f5.inv(10), Err(Error::DivisionByZero));
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        let a = gf(5).element(1);
        let b = gf(7).element(1);
        assert_eq!(a.add(b), Err(Error::ModulusMismatch { left: 5, right: 7 }));
    }

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert_eq!(PrimeField::new(1), Err(Error::ModulusOutOfRange(1)));
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(1 << 31), Err(Error::ModulusOutOfRange(1 << 31)));
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new(10007).is_ok());
    }

    #[test]
    fn primality_matches_sieve() {
        let n = 5000usize;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u64), p, "{i}");
        }
        assert_eq!(next_prime_above(72), 73);
        assert_eq!(next_prime_above(768), 769);
    }

    #[test]
    fn inverse_round_trips() {
        let f = gf(769);
        for a in 1..769 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.pow(3, 768), 1);
    }
}
