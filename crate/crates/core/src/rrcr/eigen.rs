//! Dense non-Hermitian eigensolver.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// All eigenvalues of a dense complex matrix via Schur reduction
/// (Hessenberg + shifted QR). No eigenvectors are formed.
///
/// Iteration budget: 30 QR sweeps per dimension; exhaustion is reported
/// as an error, never silently truncated.
pub fn eigensolve_dense(matrix: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(Error::NonSquare {
            rows: n,
            cols: matrix.ncols(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let z = matrix[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    let max_iter = 30 * n;
    let schur = nalgebra::Schur::try_new(matrix.clone(), f64::EPSILON, max_iter)
        .ok_or(Error::EigenNonConvergence { max_iter })?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Eigenvalues sorted by real part (ties by imaginary part); convenient
/// for comparing spectra.
pub fn sorted_eigenvalues(matrix: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let mut ev = eigensolve_dense(matrix)?;
    ev.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(-3.0, 0.0),
        ]));
        let ev = sorted_eigenvalues(&d).unwrap();
        assert!((ev[0] - Complex64::new(-3.0, 0.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((ev[2] - Complex64::new(2.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn swap_matrix() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let ev = sorted_eigenvalues(&m).unwrap();
        assert!((ev[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn transpose_has_same_spectrum() {
        let m = DMatrix::from_fn(5, 5, |i, j| {
            Complex64::new((i * 3 + j) as f64 * 0.1, ((i + 2 * j) as f64).sin())
        });
        let a = sorted_eigenvalues(&m).unwrap();
        let b = sorted_eigenvalues(&m.transpose()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_nonfinite() {
        let mut m = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            eigensolve_dense(&m),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }
}
