//! Nonlinear resolvents `G_r = (Id + r f)⁻¹` of semi-complete vector fields
//! on the unit disk, and numerical verification of sharp bounds on their
//! early Taylor coefficients and Fekete–Szegő functional.
//!
//! The series engine and the rational closed forms are generic over the
//! real scalar; the aliases below fix the common choices.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fields;
pub mod functionals;
pub mod resolvents;
pub mod schwarz;
pub mod semigroup;
pub mod series;

pub use error::{Error, Result};
pub use fields::{catalog, Family, VectorFieldSpec};
pub use functionals::{HalfPlaneMap, LambdaClassification, Region};
pub use resolvents::ResolventSpec;
pub use schwarz::SchwarzSpec;
pub use series::{Scalar, TruncatedSeries};

/// Double-precision complex series, used by all numerical routines.
pub type Series = TruncatedSeries<f64>;
/// Single-precision complex series.
pub type Series32 = TruncatedSeries<f32>;
/// Exact series over complex rationals.
pub type ExactSeries = TruncatedSeries<num_rational::Rational64>;

/// Double-precision half-plane map.
pub type HalfPlane = HalfPlaneMap<f64>;
/// Exact half-plane map over complex rationals.
pub type ExactHalfPlane = HalfPlaneMap<num_rational::Rational64>;
