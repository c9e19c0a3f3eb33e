//! Bound states and resonances of H = p^2 + (x^2 - 2J) exp(-lambda x^2) + 2J
//! by two independent routes:
//!
//! * determinant quantization of the Riccati series in arbitrary
//!   precision ([`riccati`], [`hankel`]), and
//! * complex-rotation Rayleigh-Ritz in an oscillator basis ([`rrcr`]).
//!
//! The numeric substrate is generic over the scalar type through the
//! [`numerics::Real`] trait; the aliases below fix the two concrete
//! backends used throughout.

pub mod error;
pub mod hankel;
pub mod model;
pub mod numerics;
pub mod riccati;
pub mod rrcr;

pub use error::{Error, Result};

/// Arbitrary-precision real scalar (MPFR-backed).
pub type BigReal = rug::Float;
/// Arbitrary-precision complex value.
pub type BigComplex = numerics::Cplx<BigReal>;
/// Double-precision complex value in the generic layer.
pub type SmallComplex = numerics::Cplx<f64>;
/// Parameters at working precision.
pub type BigParams = model::PotentialParams<BigReal>;
/// Parameters in double precision (Rayleigh-Ritz lane).
pub type SmallParams = model::PotentialParams<f64>;
