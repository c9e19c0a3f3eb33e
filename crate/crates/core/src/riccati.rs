//! Taylor coefficients of the regularized logarithmic derivative.
//!
//! With f(x) = x * sum_j f_j(E) x^{2j} and u_0 = -E, u_j = v_j (the
//! potential's Taylor coefficients), the Riccati equation fixes
//!
//!   f_0 = -u_0 / (2s + 1)
//!   f_j = (sum_{k=0}^{j-1} f_k f_{j-1-k} - u_j) / (2j + 2s + 1)
//!
//! and, differentiating in E,
//!
//!   g_0 = 1 / (2s + 1)
//!   g_j = sum_{k=0}^{j-1} (f_k g_{j-1-k} + g_k f_{j-1-k}) / (2j + 2s + 1).

use crate::error::{Error, Result};
use crate::model::{taylor_coeffs, PotentialParams};
use crate::numerics::{Cplx, Real};

/// Parity sector: s = 0 for even states, s = 1 for odd states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn s(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "even" | "0" => Ok(Parity::Even),
            "odd" | "1" => Ok(Parity::Odd),
            other => Err(Error::InvalidParameter(format!(
                "parity must be even|odd, got {other:?}"
            ))),
        }
    }
}

/// Coefficients f_0..f_jmax at a trial energy, optionally with their
/// energy derivatives g_j.
#[derive(Clone, Debug)]
pub struct RiccatiSeries<T: Real> {
    pub parity: Parity,
    pub energy: Cplx<T>,
    pub f: Vec<Cplx<T>>,
    pub g: Option<Vec<Cplx<T>>>,
}

impl<T: Real> RiccatiSeries<T> {
    /// Number of coefficients beyond f_0.
    pub fn order(&self) -> usize {
        self.f.len().saturating_sub(1)
    }
}

/// Caches the potential coefficients v_j so that a Newton loop can
/// re-enter with many trial energies at identical parameters.
#[derive(Clone, Debug)]
pub struct RiccatiEngine<T: Real> {
    params: PotentialParams<T>,
    v: Vec<T>,
}

impl<T: Real> RiccatiEngine<T> {
    pub fn new(params: PotentialParams<T>, j_capacity: usize) -> Self {
        let v = taylor_coeffs(&params, j_capacity.max(1));
        Self { params, v }
    }

    pub fn params(&self) -> &PotentialParams<T> {
        &self.params
    }

    pub fn capacity(&self) -> usize {
        self.v.len()
    }

    pub fn coeffs(&self, parity: Parity, energy: &Cplx<T>, j_max: usize) -> Result<RiccatiSeries<T>> {
        self.run(parity, energy, j_max, false)
    }

    pub fn coeffs_with_de(
        &self,
        parity: Parity,
        energy: &Cplx<T>,
        j_max: usize,
    ) -> Result<RiccatiSeries<T>> {
        self.run(parity, energy, j_max, true)
    }

    fn run(
        &self,
        parity: Parity,
        energy: &Cplx<T>,
        j_max: usize,
        with_de: bool,
    ) -> Result<RiccatiSeries<T>> {
        if j_max > self.v.len() {
            return Err(Error::InsufficientCoefficients {
                needed: j_max,
                have: self.v.len(),
            });
        }
        let s = parity.s();
        let zero = energy.zero_like();

        let mut f: Vec<Cplx<T>> = Vec::with_capacity(j_max + 1);
        // divide at working precision: 1/3 is not representable in binary
        let inv_leading = energy.re.lift(1.0) / energy.re.lift((2 * s + 1) as f64);
        f.push(energy.scale(&inv_leading));

        let mut g: Vec<Cplx<T>> = Vec::new();
        if with_de {
            g.reserve(j_max + 1);
            g.push(Cplx::new(inv_leading.clone(), energy.re.lift(0.0)));
        }

        for j in 1..=j_max {
            let mut conv = zero.clone();
            for k in 0..j {
                conv += f[k].clone() * &f[j - 1 - k];
            }
            conv.re -= &self.v[j - 1];
            let denom = energy.re.lift((2 * j + 2 * s + 1) as f64);
            let inv = energy.re.lift(1.0) / denom;
            f.push(conv.scale(&inv));

            if with_de {
                let mut dconv = zero.clone();
                for k in 0..j {
                    dconv += f[k].clone() * &g[j - 1 - k];
                    dconv += g[k].clone() * &f[j - 1 - k];
                }
                g.push(dconv.scale(&inv));
            }
        }

        Ok(RiccatiSeries {
            parity,
            energy: energy.clone(),
            f,
            g: if with_de { Some(g) } else { None },
        })
    }
}

/// One-shot coefficient generation without derivatives.
pub fn riccati_coeffs<T: Real>(
    params: &PotentialParams<T>,
    parity: Parity,
    energy: &Cplx<T>,
    j_max: usize,
) -> Result<RiccatiSeries<T>> {
    RiccatiEngine::new(params.clone(), j_max).coeffs(parity, energy, j_max)
}

/// One-shot coefficient generation with energy derivatives.
pub fn riccati_coeffs_with_de<T: Real>(
    params: &PotentialParams<T>,
    parity: Parity,
    energy: &Cplx<T>,
    j_max: usize,
) -> Result<RiccatiSeries<T>> {
    RiccatiEngine::new(params.clone(), j_max).coeffs_with_de(parity, energy, j_max)
}
