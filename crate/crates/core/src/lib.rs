//! Exact construction of polynomial KdV tau functions and mechanical
//! verification of their bilinear, Wronskian and wave-function identities,
//! with a floating-point companion for the trigonometric and elliptic
//! analogues.
//!
//! The algebra kernel is generic over the coefficient field
//! ([`algebra::MPoly<C>`] for any `num-traits` field) and the numeric kernels
//! are generic over [`num_traits::Float`]. The aliases below fix the exact
//! rational instantiation used by the identity checks.

pub mod algebra;
pub mod identity;
pub mod numeric;
pub mod report;
pub mod suite;
pub mod tau;
pub mod wave;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;
/// Polynomial with exact rational coefficients.
pub type Poly = algebra::MPoly<Rational>;
/// Rational function with exact rational coefficients.
pub type RatFun = algebra::RationalFunction<Rational>;
/// Polynomial over GF(2^61 - 1).
pub type ModPoly = algebra::MPoly<algebra::Mod61>;
/// Double-precision complex value used by the numeric checks.
pub type ComplexVal = num_complex::Complex64;

pub use algebra::{Var, VarKind};
