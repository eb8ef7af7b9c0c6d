//! Exact characteristic classes on toy schemes.
//!
//! The crate computes Chern classes in Hodge and de Rham cohomology from
//! Atiyah cocycles through the determinant `det(id − tA)`, derived symmetric,
//! exterior and divided powers through the Dold-Kan correspondence, and the
//! mod-p² lifting obstruction of Frobenius pullbacks of line bundles. All
//! arithmetic is exact over ℤ, ℚ or 𝔽_p; the core is generic over the base
//! scalar, with concrete aliases below.

pub mod cech;
pub mod charclass;
pub mod crystalline;
pub mod derived;
pub mod error;
pub mod homcore;
pub mod rings;

pub use error::{Error, Result};
pub use rings::{DifferentialForm, DividedPowerSeries, LaurentPoly, Matrix, Ring, Scalar, Zn};

/// ℤ
pub type Integer = num_bigint::BigInt;
/// ℚ
pub type Rational = num_rational::BigRational;
/// 𝔽_p (and ℤ/n in general); the modulus is a runtime parameter.
pub type Fp = Zn;

pub type IntPoly = LaurentPoly<Integer>;
pub type RatPoly = LaurentPoly<Rational>;
pub type FpPoly = LaurentPoly<Fp>;
