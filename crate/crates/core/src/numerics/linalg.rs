//! Dense complex LU factorization with partial pivoting.
//!
//! The Hankel matrices of the quantization condition are small (dimension
//! below ~150) and dense, so an O(n^3) factorization with pivoting by
//! largest modulus is all that is needed. A zero pivot is not an error:
//! the quantization condition is exactly "determinant = 0".

use super::complex::Cplx;
use super::real::Real;
use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug)]
pub struct CMatrix<T: Real> {
    n: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(entry(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Cplx<T>>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Cplx<T> {
        &self.data[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Cplx<T> {
        &mut self.data[i * self.n + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.data.swap(a * self.n + j, b * self.n + j);
            }
        }
    }
}

/// LU factors of a matrix, P*A = L*U.
pub struct LuFactors<T: Real> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
    odd_permutation: bool,
    /// Column at which a zero pivot was met, if any.
    singular_at: Option<usize>,
}

/// Factor with partial pivoting by largest modulus.
///
/// Rejects empty and non-finite input; a singular matrix factors fine and
/// reports determinant zero.
pub fn lu_factor<T: Real>(mut m: CMatrix<T>) -> Result<LuFactors<T>> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::NonSquare { rows: 0, cols: 0 });
    }
    for i in 0..n {
        for j in 0..n {
            if !m.get(i, j).is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }

    let mut perm: Vec<usize> = (0..n).collect();
    let mut odd = false;
    let mut singular_at = None;

    for k in 0..n {
        // pivot row: largest |entry|^2 in column k at or below the diagonal
        let mut pivot_row = k;
        let mut pivot_mag = m.get(k, k).norm_sqr();
        for r in k + 1..n {
            let mag = m.get(r, k).norm_sqr();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag.is_zero() {
            singular_at = Some(k);
            break;
        }
        if pivot_row != k {
            m.swap_rows(k, pivot_row);
            perm.swap(k, pivot_row);
            odd = !odd;
        }
        for r in k + 1..n {
            let factor = m.get(r, k).clone() / m.get(k, k);
            for c in k + 1..n {
                let delta = factor.clone() * m.get(k, c);
                *m.get_mut(r, c) -= delta;
            }
            *m.get_mut(r, k) = factor;
        }
    }

    Ok(LuFactors {
        lu: m,
        perm,
        odd_permutation: odd,
        singular_at,
    })
}

impl<T: Real> LuFactors<T> {
    pub fn is_singular(&self) -> bool {
        self.singular_at.is_some()
    }

    /// Determinant: signed product of the pivots; exactly zero for a
    /// singular matrix.
    pub fn det(&self) -> Cplx<T> {
        let zero = self.lu.get(0, 0).zero_like();
        if self.singular_at.is_some() {
            return zero;
        }
        let mut det = zero.one_like();
        for k in 0..self.lu.dim() {
            det *= self.lu.get(k, k);
        }
        if self.odd_permutation {
            -det
        } else {
            det
        }
    }

    /// Solve A x = b in place.
    pub fn solve(&self, b: &mut [Cplx<T>]) -> Result<()> {
        if self.singular_at.is_some() {
            return Err(Error::SingularMatrix);
        }
        let n = self.lu.dim();
        assert_eq!(b.len(), n);
        let permuted: Vec<Cplx<T>> = self.perm.iter().map(|&p| b[p].clone()).collect();
        b.clone_from_slice(&permuted);
        // forward substitution with unit lower triangle
        for i in 1..n {
            for j in 0..i {
                let delta = self.lu.get(i, j).clone() * &b[j];
                b[i] -= delta;
            }
        }
        // back substitution
        for i in (0..n).rev() {
            for j in i + 1..n {
                let delta = self.lu.get(i, j).clone() * &b[j];
                b[i] -= delta;
            }
            b[i] = b[i].clone() / self.lu.get(i, i);
        }
        Ok(())
    }
}

/// Determinant via LU with partial pivoting.
pub fn det_lu<T: Real>(m: CMatrix<T>) -> Result<Cplx<T>> {
    Ok(lu_factor(m)?.det())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn identity_det() {
        let m = CMatrix::from_fn(3, |i, j| c(if i == j { 1.0 } else { 0.0 }, 0.0));
        assert_eq!(det_lu(m).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn two_by_two() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let d = det_lu(m).unwrap();
        assert!((d.re + 2.0).abs() < 1e-14);
        assert!(d.im.abs() < 1e-15);
    }

    #[test]
    fn singular_det_is_zero() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 1.0), c(2.0, 2.0)],
            vec![c(2.0, 2.0), c(4.0, 4.0)],
        ])
        .unwrap();
        let d = det_lu(m).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn solve_roundtrip() {
        let m = CMatrix::from_rows(vec![
            vec![c(2.0, 1.0), c(-1.0, 0.5), c(0.0, 3.0)],
            vec![c(1.0, -2.0), c(4.0, 0.0), c(1.0, 1.0)],
            vec![c(0.5, 0.0), c(2.0, -1.0), c(3.0, 2.0)],
        ])
        .unwrap();
        let x_true = [c(1.0, -1.0), c(0.5, 2.0), c(-2.0, 0.25)];
        let mut b = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        for i in 0..3 {
            for j in 0..3 {
                b[i] += m.get(i, j).clone() * &x_true[j];
            }
        }
        let lu = lu_factor(m).unwrap();
        lu.solve(&mut b).unwrap();
        for i in 0..3 {
            assert!((b[i].clone() - &x_true[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_nonfinite() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(f64::NAN, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            det_lu(m),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }
}
