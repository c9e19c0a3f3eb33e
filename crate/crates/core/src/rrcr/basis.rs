//! Harmonic-oscillator basis matrices for the rotated Hamiltonian.
//!
//! All operators are expressed in the basis of oscillator eigenfunctions
//! with length scale omega (coordinate y = sqrt(omega) x). Kinetic and x^2
//! matrices follow from ladder-operator algebra; the Gaussian factors
//! exp(-alpha x^2) are integrated by Gauss-Hermite quadrature with an
//! internal order self-check.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PotentialParams;
use crate::numerics::Real;

/// p^2 and x^2 in the omega-scaled oscillator basis.
///
/// At omega = 1: <n|x^2|n> = (2n+1)/2, <n|x^2|n+2> = sqrt((n+1)(n+2))/2,
/// and p^2 has the same diagonal with the off-diagonal sign flipped.
/// Scaling x -> x/sqrt(omega) multiplies x^2 elements by 1/omega and p^2
/// elements by omega.
pub fn ho_kinetic_and_x2(n: usize, omega: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "basis size must be >= 2, got {n}"
        )));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "omega must be > 0, got {omega}"
        )));
    }
    let mut p2 = DMatrix::zeros(n, n);
    let mut x2 = DMatrix::zeros(n, n);
    for m in 0..n {
        let diag = (2 * m + 1) as f64 / 2.0;
        p2[(m, m)] = diag * omega;
        x2[(m, m)] = diag / omega;
        if m + 2 < n {
            let off = (((m + 1) * (m + 2)) as f64).sqrt() / 2.0;
            x2[(m, m + 2)] = off / omega;
            x2[(m + 2, m)] = off / omega;
            p2[(m, m + 2)] = -off * omega;
            p2[(m + 2, m)] = -off * omega;
        }
    }
    Ok((p2, x2))
}

/// Orthonormal Hermite functions h_0..h_count-1 at y. The recurrence
/// h_k = sqrt(2/k) y h_{k-1} - sqrt((k-1)/k) h_{k-2} stays bounded, and
/// the Gaussian envelope keeps every value representable.
fn hermite_functions(count: usize, y: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(count);
    if count == 0 {
        return h;
    }
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp();
    h.push(h0);
    if count > 1 {
        h.push(std::f64::consts::SQRT_2 * y * h[0]);
    }
    for k in 2..count {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * y * h[k - 1] - ((kf - 1.0) / kf).sqrt() * h[k - 2];
        h.push(next);
    }
    h
}

/// Gauss-Hermite rule of order q, stated for integrals of products of
/// orthonormal Hermite functions: sum_i w_i f(y_i) integrates exactly any
/// f that is a polynomial of degree < 2q times exp(-y^2).
struct HermiteRule {
    nodes: Vec<f64>,
    /// Weights divided by the squared weight function, i.e.
    /// w_i = 1 / sum_{k<q} h_k(y_i)^2.
    weights: Vec<f64>,
}

fn hermite_rule(q: usize) -> Result<HermiteRule> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "quadrature order must be >= 2, got {q}"
        )));
    }
    // Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal
    // Jacobi matrix with zero diagonal and off-diagonal sqrt(k/2).
    let jacobi = DMatrix::from_fn(q, q, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eigen = nalgebra::SymmetricEigen::new(jacobi);
    let mut nodes: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // two Newton polish steps on h_q(y) = 0 recover full double accuracy
    for y in nodes.iter_mut() {
        for _ in 0..2 {
            let h = hermite_functions(q + 1, *y);
            let derivative = (2.0 * q as f64).sqrt() * h[q - 1] - *y * h[q];
            if derivative != 0.0 {
                *y -= h[q] / derivative;
            }
        }
    }

    let weights = nodes
        .iter()
        .map(|&y| {
            let h = hermite_functions(q, y);
            1.0 / h.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    Ok(HermiteRule { nodes, weights })
}

fn gaussian_elements_at_order(
    n: usize,
    alpha_eff: Complex64,
    q: usize,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let rule = hermite_rule(q)?;
    let mut g0 = DMatrix::zeros(n, n);
    let mut g2 = DMatrix::zeros(n, n);
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        // half the Gaussian factor per basis function keeps every
        // intermediate bounded even when Re(alpha) approaches -1
        let half = (-0.5 * alpha_eff * y * y).exp();
        let t: Vec<Complex64> = hermite_functions(n, y)
            .into_iter()
            .map(|h| half * h)
            .collect();
        let y2 = y * y;
        for m in 0..n {
            for l in (m..n).step_by(2) {
                let product = w * t[m] * t[l];
                g0[(m, l)] += product;
                g2[(m, l)] += y2 * product;
            }
        }
    }
    for m in 0..n {
        for l in (m + 2..n).step_by(2) {
            g0[(l, m)] = g0[(m, l)];
            g2[(l, m)] = g2[(m, l)];
        }
    }
    Ok((g0, g2))
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// G0 = <m|exp(-alpha x^2)|n> and G2 = <m|x^2 exp(-alpha x^2)|n> in the
/// omega-scaled basis.
///
/// Quadrature order Q = 2N + 32, verified against Q + 16: the relative
/// deviation on the largest element must stay below 1e-12. Elements with
/// m + n odd are exact zeros by parity.
pub fn ho_gaussian_elements(
    n: usize,
    omega: f64,
    alpha: Complex64,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "basis size must be >= 2, got {n}"
        )));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "omega must be > 0, got {omega}"
        )));
    }
    let alpha_eff = alpha / omega;
    if alpha_eff.re <= -1.0 {
        return Err(Error::GaussianDivergent {
            re_alpha: alpha_eff.re,
        });
    }

    let q = 2 * n + 32;
    let (g0, mut g2) = gaussian_elements_at_order(n, alpha_eff, q)?;
    let (g0_ref, g2_ref) = gaussian_elements_at_order(n, alpha_eff, q + 16)?;
    let scale = max_abs(&g0_ref).max(max_abs(&g2_ref)).max(f64::MIN_POSITIVE);
    let deviation = max_abs_diff(&g0, &g0_ref).max(max_abs_diff(&g2, &g2_ref)) / scale;
    if deviation > 1e-12 {
        return Err(Error::QuadratureSelfCheck {
            deviation,
            q,
            q_ref: q + 16,
        });
    }
    // x = y / sqrt(omega)
    g2 /= Complex64::new(omega, 0.0);
    Ok((g0, g2))
}

/// Rotation-method configuration: angle theta, basis size and scale.
#[derive(Clone, Debug)]
pub struct RotationSetup {
    pub params: PotentialParams<f64>,
    pub theta: f64,
    pub n: usize,
    pub omega: f64,
}

/// Angle beyond which the rotated Gaussian tail stops decaying and the
/// stabilized resonance family switches.
pub const THETA_CRIT: f64 = std::f64::consts::FRAC_PI_4;

impl RotationSetup {
    pub fn new(params: PotentialParams<f64>, theta: f64, n: usize, omega: f64) -> Result<Self> {
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, pi/2), got {theta}"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "basis size must be >= 2, got {n}"
            )));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega must be > 0, got {omega}"
            )));
        }
        let setup = Self {
            params,
            theta,
            n,
            omega,
        };
        let alpha_eff = setup.alpha() / omega;
        if alpha_eff.re <= -1.0 {
            return Err(Error::GaussianDivergent {
                re_alpha: alpha_eff.re,
            });
        }
        Ok(setup)
    }

    /// alpha = lambda exp(2 i theta), the rotated Gaussian exponent.
    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.params.lambda().to_f64(), 2.0 * self.theta)
    }

    pub fn beyond_critical(&self) -> bool {
        self.theta > THETA_CRIT
    }
}

/// Matrix of exp(-2 i theta) p^2 + V(exp(i theta) x):
///
///   M = e^{-2 i theta} P + e^{2 i theta} G2(alpha) - 2J G0(alpha) + 2J I
///
/// with alpha = lambda e^{2 i theta}. Complex symmetric by construction.
pub fn build_rotated_hamiltonian(setup: &RotationSetup) -> Result<DMatrix<Complex64>> {
    let (p2, _) = ho_kinetic_and_x2(setup.n, setup.omega)?;
    let (g0, g2) = ho_gaussian_elements(setup.n, setup.omega, setup.alpha())?;
    let phase = Complex64::from_polar(1.0, 2.0 * setup.theta);
    let two_j = Complex64::new(2.0 * setup.params.j().to_f64(), 0.0);
    let mut m = g2 * phase - g0 * two_j;
    for i in 0..setup.n {
        m[(i, i)] += two_j;
        for k in 0..setup.n {
            m[(i, k)] += p2[(i, k)] / phase;
        }
    }
    Ok(m)
}

/// Matrix of the companion Hamiltonian p^2 + (x^2 + 2J) e^{lambda x^2} - 2J,
/// i.e. the rotated problem continued to theta = pi/2, handled by the same
/// Gaussian elements with alpha = -lambda.
pub fn build_companion_hamiltonian(
    params: &PotentialParams<f64>,
    n: usize,
    omega: f64,
) -> Result<DMatrix<Complex64>> {
    let (p2, _) = ho_kinetic_and_x2(n, omega)?;
    let alpha = Complex64::new(-params.lambda().to_f64(), 0.0);
    let (g0, g2) = ho_gaussian_elements(n, omega, alpha)?;
    let two_j = Complex64::new(2.0 * params.j().to_f64(), 0.0);
    let mut m = g2 + g0 * two_j;
    for i in 0..n {
        m[(i, i)] -= two_j;
        for k in 0..n {
            m[(i, k)] += Complex64::new(p2[(i, k)], 0.0);
        }
    }
    Ok(m)
}
