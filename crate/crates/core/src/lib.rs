//! Parameterized hardness reductions from constraint satisfaction down to the
//! minimum distance problem for binary codes and the shortest vector problem
//! for integer lattices, together with exact brute-force oracles that check
//! every promise mapping on small instances.
//!
//! The GF(2) side lives in [`gf2`], [`gf2codes`], [`mldchain`], [`scc`] and
//! [`mdpchain`]. The integer side lives in [`latticecore`] and [`svpchain`].
//! [`instance`] and [`harness`] provide file formats and the verification
//! pipelines used by the command-line tool.

pub mod budget;
pub mod csp;
pub mod error;
pub mod gf2;
pub mod gf2codes;
pub mod harness;
pub mod instance;
pub mod latticecore;
pub mod mdpchain;
pub mod mldchain;
pub mod ratio;
pub mod scc;
pub mod svpchain;

pub use budget::Budget;
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};

/// Exact rational numbers used for every gap and probability.
pub type Rational = num_rational::BigRational;

/// Unbounded integer matrix, the carrier of all lattice instances.
pub type IntMatrix = latticecore::Matrix<num_bigint::BigInt>;

/// Unbounded integer vector.
pub type IntVector = Vec<num_bigint::BigInt>;

/// Machine-word integer matrix for small surrogate lattices.
pub type SmallIntMatrix = latticecore::Matrix<i64>;
