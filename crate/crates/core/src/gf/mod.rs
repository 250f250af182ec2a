//! Exact arithmetic and dense linear algebra over prime fields GF(p).

mod field;
mod matrix;

pub use field::{field_arith, is_prime, next_prime_above, ArithOp, FieldElement, PrimeField, MAX_MODULUS};
pub use matrix::FieldMatrix;
