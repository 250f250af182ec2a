//! Exact finite-field tooling for MDS variable generation and secure
//! summation with user selection.
//!
//! Every random variable here is a linear image of a uniform seed over a
//! prime field, so entropies are matrix ranks and every check is an exact
//! integer comparison.

pub mod error;
pub mod gf;
pub mod linrv;
pub mod mdsgen;
pub mod mdsverify;
pub mod rational;
pub mod report;
pub mod rng;
pub mod securesum;
pub mod subsets;

pub use error::{Error, Result};
pub use gf::{FieldElement, FieldMatrix, PrimeField};
pub use linrv::{EntropyValue, LinearRV, SeedSpace};
pub use rational::Rational;
pub use report::{Check, Relation, VerifyReport};
