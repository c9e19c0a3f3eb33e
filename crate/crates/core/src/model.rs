//! The Gaussian well with two barriers: V(x) = (x^2 - 2J) exp(-lambda x^2) + 2J.
//!
//! Defines the potential, its barrier geometry, the even-power Taylor
//! coefficients about the origin and the small-lambda harmonic estimate.

use crate::error::{Error, Result};
use crate::numerics::{Cplx, Real};

/// Well-depth parameter J and Gaussian width parameter lambda, both
/// dimensionless and positive for the physical potential.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialParams<T: Real> {
    j: T,
    lambda: T,
}

impl<T: Real> PotentialParams<T> {
    /// Physical parameters: J > 0 and lambda > 0.
    pub fn new(j: T, lambda: T) -> Result<Self> {
        let zero = j.lift(0.0);
        if !(j > zero) || !j.is_finite() {
            return Err(Error::InvalidParameter(format!("J must be > 0, got {j}")));
        }
        if !(lambda > zero) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be > 0, got {lambda}"
            )));
        }
        Ok(Self { j, lambda })
    }

    /// Allows the degenerate limits J = 0 and/or lambda = 0, where the
    /// potential reduces to the pure oscillator. Legal for the Taylor
    /// generator and the harmonic estimate; solver front ends reject
    /// degenerate parameters.
    pub fn degenerate(j: T, lambda: T) -> Result<Self> {
        let zero = j.lift(0.0);
        if !(j >= zero) || !j.is_finite() {
            return Err(Error::InvalidParameter(format!("J must be >= 0, got {j}")));
        }
        if !(lambda >= zero) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be >= 0, got {lambda}"
            )));
        }
        Ok(Self { j, lambda })
    }

    pub fn j(&self) -> &T {
        &self.j
    }

    pub fn lambda(&self) -> &T {
        &self.lambda
    }

    pub fn is_degenerate(&self) -> bool {
        self.j.is_zero() || self.lambda.is_zero()
    }

    /// Continuum threshold 2J.
    pub fn threshold(&self) -> T {
        self.j.clone() * self.j.lift(2.0)
    }
}

/// Barrier position, barrier height and continuum threshold.
#[derive(Clone, Debug)]
pub struct BarrierInfo<T: Real> {
    /// x_b = sqrt((2 J lambda + 1) / lambda)
    pub x_b: T,
    /// V(+-x_b) = exp(-2 J lambda - 1) / lambda + 2J
    pub v_b: T,
    /// 2J
    pub threshold: T,
}

/// V evaluated at a complex coordinate; entire in x, real for real x.
pub fn eval_potential<T: Real>(params: &PotentialParams<T>, x: &Cplx<T>) -> Cplx<T> {
    let two_j = params.threshold();
    let x_sq = x.clone() * x;
    let gauss = (-(x_sq.scale(params.lambda()))).exp();
    let mut shifted = x_sq;
    shifted.re -= &two_j;
    let mut value = shifted * gauss;
    value.re += &two_j;
    value
}

pub fn barrier_info<T: Real>(params: &PotentialParams<T>) -> Result<BarrierInfo<T>> {
    let lambda = params.lambda();
    if lambda.is_zero() {
        return Err(Error::InvalidParameter(
            "barrier geometry is undefined for lambda = 0".into(),
        ));
    }
    let one = lambda.lift(1.0);
    let two_j_lambda = params.threshold() * lambda;
    let x_b = ((two_j_lambda.clone() + &one) / lambda).sqrt();
    let v_b = (-(two_j_lambda + &one)).exp() / lambda + params.threshold();
    Ok(BarrierInfo {
        x_b,
        v_b,
        threshold: params.threshold(),
    })
}

/// Coefficients v_j of x^{2j}, j = 1..n_max, in the Taylor expansion of V
/// about the origin:
///
///   v_j = (-lambda)^{j-1} / (j-1)!  -  2J (-lambda)^j / j!
///
/// v_0 vanishes identically and is not returned. Generated from the
/// closed form: O(n) work and no cancellation between partial products.
pub fn taylor_coeffs<T: Real>(params: &PotentialParams<T>, n_max: usize) -> Vec<T> {
    assert!(n_max >= 1, "n_max must be at least 1");
    let neg_lambda = -params.lambda().clone();
    let two_j = params.threshold();
    let mut coeffs = Vec::with_capacity(n_max);
    // running term (-lambda)^{j-1} / (j-1)!
    let mut term = neg_lambda.lift(1.0);
    for j in 1..=n_max {
        let next = term.clone() * &neg_lambda / term.lift(j as f64);
        coeffs.push(term - two_j.clone() * &next);
        term = next;
    }
    coeffs
}

/// Harmonic estimate sqrt(2 J lambda + 1) * (2n + 1).
///
/// Valid when lambda << 1 and the estimate is well below the threshold 2J.
pub fn harmonic_estimate<T: Real>(params: &PotentialParams<T>, n: usize) -> T {
    let one = params.j().lift(1.0);
    let omega = (params.threshold() * params.lambda() + &one).sqrt();
    omega * one.lift((2 * n + 1) as f64)
}
