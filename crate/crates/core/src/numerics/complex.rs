//! Complex values over any [`Real`] backend.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::real::Real;

/// Complex number with real and imaginary part in the active precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Cplx<T: Real> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Cplx<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: T) -> Self {
        let im = re.lift(0.0);
        Self { re, im }
    }

    /// New complex value in the same precision context as `self`.
    pub fn lift(&self, re: f64, im: f64) -> Self {
        Self {
            re: self.re.lift(re),
            im: self.re.lift(im),
        }
    }

    pub fn zero_like(&self) -> Self {
        self.lift(0.0, 0.0)
    }

    pub fn one_like(&self) -> Self {
        self.lift(1.0, 0.0)
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }

    pub fn abs(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            re: self.re.clone() * factor,
            im: self.im.clone() * factor,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// exp(re + i im) = exp(re) (cos im + i sin im)
    pub fn exp(&self) -> Self {
        let magnitude = self.re.exp();
        Self {
            re: magnitude.clone() * self.im.cos(),
            im: magnitude * self.im.sin(),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl<T: Real> fmt::Display for Cplx<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {:+}i)", self.re, self.im)
    }
}

impl<T: Real> Neg for Cplx<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<T: Real> Add for Cplx<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.re += &rhs.re;
        self.im += &rhs.im;
        self
    }
}

impl<'a, T: Real> Add<&'a Cplx<T>> for Cplx<T> {
    type Output = Cplx<T>;
    fn add(mut self, rhs: &'a Cplx<T>) -> Cplx<T> {
        self.re += &rhs.re;
        self.im += &rhs.im;
        self
    }
}

impl<T: Real> Sub for Cplx<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
        self
    }
}

impl<'a, T: Real> Sub<&'a Cplx<T>> for Cplx<T> {
    type Output = Cplx<T>;
    fn sub(mut self, rhs: &'a Cplx<T>) -> Cplx<T> {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
        self
    }
}

impl<T: Real> AddAssign for Cplx<T> {
    fn add_assign(&mut self, rhs: Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a, T: Real> AddAssign<&'a Cplx<T>> for Cplx<T> {
    fn add_assign(&mut self, rhs: &'a Cplx<T>) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<T: Real> SubAssign for Cplx<T> {
    fn sub_assign(&mut self, rhs: Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a, T: Real> SubAssign<&'a Cplx<T>> for Cplx<T> {
    fn sub_assign(&mut self, rhs: &'a Cplx<T>) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

fn mul_parts<T: Real>(a: &Cplx<T>, b: &Cplx<T>) -> Cplx<T> {
    Cplx {
        re: a.re.clone() * &b.re - a.im.clone() * &b.im,
        im: a.re.clone() * &b.im + a.im.clone() * &b.re,
    }
}

impl<T: Real> Mul for Cplx<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        mul_parts(&self, &rhs)
    }
}

impl<'a, T: Real> Mul<&'a Cplx<T>> for Cplx<T> {
    type Output = Cplx<T>;
    fn mul(self, rhs: &'a Cplx<T>) -> Cplx<T> {
        mul_parts(&self, rhs)
    }
}

impl<T: Real> MulAssign for Cplx<T> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = mul_parts(self, &rhs);
    }
}

impl<'a, T: Real> MulAssign<&'a Cplx<T>> for Cplx<T> {
    fn mul_assign(&mut self, rhs: &'a Cplx<T>) {
        *self = mul_parts(self, rhs);
    }
}

// Smith's algorithm keeps intermediate magnitudes balanced.
fn div_parts<T: Real>(a: &Cplx<T>, b: &Cplx<T>) -> Cplx<T> {
    if b.re.clone().abs() >= b.im.clone().abs() {
        let ratio = b.im.clone() / &b.re;
        let denom = b.re.clone() + b.im.clone() * &ratio;
        Cplx {
            re: (a.re.clone() + a.im.clone() * &ratio) / &denom,
            im: (a.im.clone() - a.re.clone() * &ratio) / &denom,
        }
    } else {
        let ratio = b.re.clone() / &b.im;
        let denom = b.im.clone() + b.re.clone() * &ratio;
        Cplx {
            re: (a.re.clone() * &ratio + &a.im) / &denom,
            im: (a.im.clone() * &ratio - &a.re) / &denom,
        }
    }
}

impl<T: Real> Div for Cplx<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        div_parts(&self, &rhs)
    }
}

impl<'a, T: Real> Div<&'a Cplx<T>> for Cplx<T> {
    type Output = Cplx<T>;
    fn div(self, rhs: &'a Cplx<T>) -> Cplx<T> {
        div_parts(&self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn arithmetic() {
        let a = c(1.0, 2.0);
        let b = c(3.0, -1.0);
        assert_eq!(a.clone() + &b, c(4.0, 1.0));
        assert_eq!(a.clone() - &b, c(-2.0, 3.0));
        assert_eq!(a.clone() * &b, c(5.0, 5.0));
        let q = a.clone() / &b;
        let back = q * &b;
        assert!((back.re - a.re).abs() < 1e-14);
        assert!((back.im - a.im).abs() < 1e-14);
    }

    #[test]
    fn exp_matches_euler() {
        let z = c(0.0, std::f64::consts::PI);
        let e = z.exp();
        assert!((e.re + 1.0).abs() < 1e-15);
        assert!(e.im.abs() < 1e-15);
    }

    #[test]
    fn division_near_axis() {
        let a = c(1.0, 0.0);
        let b = c(0.0, 2.0);
        let q = a / &b;
        assert_eq!(q, c(0.0, -0.5));
    }

    #[test]
    fn big_mul() {
        let one: rug::Float = crate::numerics::Real::with_digits(60, 1.0);
        let a = Cplx::new(one.clone(), one.lift(2.0));
        let b = a.lift(3.0, -1.0);
        let p = a * &b;
        assert_eq!(p.re.to_f64(), 5.0);
        assert_eq!(p.im.to_f64(), 5.0);
    }
}
