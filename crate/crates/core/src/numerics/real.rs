//! Scalar abstraction over the working arithmetic.
//!
//! The determinant quantization runs in arbitrary precision (`rug::Float`,
//! i.e. MPFR), while quick checks and the Rayleigh-Ritz lane run in `f64`.
//! Everything upstream is generic over [`Real`], so the two backends share
//! one implementation of the series, determinant and root-finding code.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// A real scalar: `f64` or an arbitrary-precision float.
///
/// Values carry their own precision; `lift` creates constants in the same
/// precision context as an existing value, so no operation silently changes
/// precision.
pub trait Real:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    /// Create a value with (at least) `digits` decimal digits of mantissa.
    fn with_digits(digits: u32, value: f64) -> Self;

    /// Parse a decimal string at the given precision.
    fn parse_with_digits(digits: u32, text: &str) -> Option<Self>;

    /// A new value in the same precision context as `self`.
    fn lift(&self, value: f64) -> Self;

    /// Approximate decimal precision carried by this value.
    fn digits(&self) -> u32;

    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;

    /// Decimal string that parses back to exactly this value.
    fn to_decimal(&self) -> String;
}

impl Real for f64 {
    fn with_digits(_digits: u32, value: f64) -> Self {
        value
    }

    fn parse_with_digits(_digits: u32, text: &str) -> Option<Self> {
        text.parse().ok()
    }

    fn lift(&self, value: f64) -> Self {
        value
    }

    fn digits(&self) -> u32 {
        15
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn to_decimal(&self) -> String {
        // `Display` for f64 is the shortest round-tripping representation.
        format!("{self}")
    }
}

fn digits_to_prec(digits: u32) -> u32 {
    ((digits as f64 * LOG2_10).ceil() as u32 + 16).max(53)
}

impl Real for rug::Float {
    fn with_digits(digits: u32, value: f64) -> Self {
        rug::Float::with_val(digits_to_prec(digits), value)
    }

    fn parse_with_digits(digits: u32, text: &str) -> Option<Self> {
        rug::Float::parse(text)
            .ok()
            .map(|incomplete| rug::Float::with_val(digits_to_prec(digits), incomplete))
    }

    fn lift(&self, value: f64) -> Self {
        rug::Float::with_val(self.prec(), value)
    }

    fn digits(&self) -> u32 {
        ((self.prec().saturating_sub(16)) as f64 / LOG2_10).floor() as u32
    }

    fn to_f64(&self) -> f64 {
        rug::Float::to_f64(self)
    }

    fn sqrt(&self) -> Self {
        self.clone().sqrt()
    }

    fn exp(&self) -> Self {
        self.clone().exp()
    }

    fn sin(&self) -> Self {
        self.clone().sin()
    }

    fn cos(&self) -> Self {
        self.clone().cos()
    }

    fn abs(&self) -> Self {
        self.clone().abs()
    }

    fn is_finite(&self) -> bool {
        rug::Float::is_finite(self)
    }

    fn is_zero(&self) -> bool {
        rug::Float::is_zero(self)
    }

    fn to_decimal(&self) -> String {
        self.to_string_radix(10, None)
    }
}

/// Integer power by binary exponentiation; works for negative exponents.
pub fn pow_i64<T: Real>(base: &T, exp: i64) -> T {
    if exp < 0 {
        return base.lift(1.0) / pow_i64(base, -exp);
    }
    let mut result = base.lift(1.0);
    let mut square = base.clone();
    let mut e = exp as u64;
    while e > 0 {
        if e & 1 == 1 {
            result *= &square;
        }
        e >>= 1;
        if e > 0 {
            let copy = square.clone();
            square *= &copy;
        }
    }
    result
}

/// Explicit working precision for arbitrary-precision runs.
///
/// The context is immutable; values created through it carry at least
/// `digits` decimal digits and keep that precision through arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < 30 {
            return Err(Error::InvalidParameter(format!(
                "precision must be at least 30 digits, got {digits}"
            )));
        }
        Ok(Self { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    pub fn real<T: Real>(self, value: f64) -> T {
        T::with_digits(self.digits, value)
    }

    pub fn parse_real<T: Real>(self, text: &str) -> Result<T> {
        T::parse_with_digits(self.digits, text)
            .ok_or_else(|| Error::InvalidParameter(format!("cannot parse number {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_f64() {
        assert_eq!(pow_i64(&2.0_f64, 10), 1024.0);
        assert_eq!(pow_i64(&2.0_f64, 0), 1.0);
        assert_eq!(pow_i64(&2.0_f64, -2), 0.25);
        assert_eq!(pow_i64(&-3.0_f64, 3), -27.0);
    }

    #[test]
    fn big_decimal_roundtrip() {
        let x: rug::Float = Real::with_digits(120, 0.1);
        let y = rug::Float::parse_with_digits(120, &x.to_decimal()).unwrap();
        assert_eq!(x, y);
        let z = rug::Float::parse_with_digits(120, "1.004080724283934").unwrap();
        assert!(z.digits() >= 120);
    }

    #[test]
    fn context_rejects_low_precision() {
        assert!(PrecisionContext::new(10).is_err());
        assert!(PrecisionContext::new(30).is_ok());
    }

    #[test]
    fn lift_keeps_precision() {
        let x: rug::Float = Real::with_digits(200, 1.5);
        let y = x.lift(2.5);
        assert_eq!(x.prec(), y.prec());
    }
}
