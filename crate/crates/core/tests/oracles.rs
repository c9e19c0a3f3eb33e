//! Independent re-implementations checking the numeric kernels: cofactor
//! determinants against the LU path, finite differences against analytic
//! derivatives, and the characteristic polynomial against the eigensolver.

use doublewell_core::hankel::{hankel_value, hankel_value_and_de, HankelSpec};
use doublewell_core::model::PotentialParams;
use doublewell_core::numerics::{lu_factor, CMatrix, Cplx, Real};
use doublewell_core::riccati::{riccati_coeffs, riccati_coeffs_with_de, Parity};
use doublewell_core::rrcr::sorted_eigenvalues;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Cplx<f64> {
    Cplx::new(re, im)
}

/// Determinant by cofactor expansion along the first row. Exponential
/// cost, usable up to n ~ 8; that is the point — it shares no code with
/// the LU path.
fn det_cofactor(m: &[Vec<Cplx<f64>>]) -> Cplx<f64> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = c(0.0, 0.0);
    for (j, entry) in m[0].iter().enumerate() {
        let minor: Vec<Vec<Cplx<f64>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += entry.clone() * det_cofactor(&minor).scale(&sign);
    }
    total
}

/// Deterministic but scattered test matrices.
fn fill(n: usize, salt: u64) -> Vec<Vec<Cplx<f64>>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = (salt + 31 * i as u64 + 7 * j as u64) as f64;
                    c((k * 0.7).sin(), (k * 1.3).cos() * 0.5)
                })
                .collect()
        })
        .collect()
}

#[test]
fn lu_determinant_matches_cofactor_expansion() {
    for n in 1..=6 {
        for salt in [1u64, 17, 91] {
            let rows = fill(n, salt);
            let oracle = det_cofactor(&rows);
            let lu = lu_factor(CMatrix::from_rows(rows).unwrap()).unwrap();
            // entries are O(1), so both paths cancel at the 1e-16 level
            // regardless of how small the determinant itself comes out
            let err = (lu.det() - &oracle).abs();
            assert!(err <= 1e-12, "n={n} salt={salt}: {err:e}");
        }
    }
}

/// Each series coefficient is a polynomial in E of degree j + 1, so its
/// forward differences of order j + 2 over an integer grid vanish.
#[test]
fn series_coefficients_are_polynomial_in_energy() {
    let params = PotentialParams::new(0.8, 0.1).unwrap();
    for parity in [Parity::Even, Parity::Odd] {
        for j in [0usize, 1, 2, 5, 8] {
            let order = j + 2;
            let points = order + 1;
            let mut values: Vec<Cplx<f64>> = (0..points)
                .map(|k| {
                    riccati_coeffs(&params, parity, &c(k as f64, 0.5), j)
                        .unwrap()
                        .f[j]
                        .clone()
                })
                .collect();
            let scale = values.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
            for _ in 0..order {
                values = values.windows(2).map(|w| w[1].clone() - &w[0]).collect();
            }
            assert!(
                values[0].abs() <= 1e-8 * scale,
                "parity {parity:?}, j={j}: residual {:e} (scale {scale:e})",
                values[0].abs()
            );
        }
    }
}

#[test]
fn determinant_derivative_matches_central_difference() {
    let params = PotentialParams::new(0.8, 0.1).unwrap();
    let e = c(1.2, -0.15);
    let h = 1e-6;
    for (dim, d) in [(2usize, 0usize), (3, 0), (4, 1)] {
        let spec = HankelSpec::new(dim, d, Parity::Even).unwrap();
        let order = spec.required_order();
        let series = riccati_coeffs_with_de(&params, Parity::Even, &e, order).unwrap();
        let (_, analytic) = hankel_value_and_de(&series, &spec).unwrap();

        let up = riccati_coeffs(&params, Parity::Even, &c(e.re + h, e.im), order).unwrap();
        let down = riccati_coeffs(&params, Parity::Even, &c(e.re - h, e.im), order).unwrap();
        let fd = (hankel_value(&up, &spec).unwrap() - &hankel_value(&down, &spec).unwrap())
            .scale(&(0.5 / h));
        let err = (fd - &analytic).abs();
        assert!(
            err <= 1e-7 * analytic.abs().max(1e-30),
            "D={dim} d={d}: {err:e}"
        );
    }
}

fn char_poly_at(m: &DMatrix<Complex64>, z: Complex64) -> Cplx<f64> {
    let n = m.nrows();
    let rows: Vec<Vec<Cplx<f64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut entry = m[(i, j)];
                    if i == j {
                        entry -= z;
                    }
                    c(entry.re, entry.im)
                })
                .collect()
        })
        .collect();
    det_cofactor(&rows)
}

#[test]
fn eigenvalues_kill_the_characteristic_polynomial() {
    let n = 6;
    let m = DMatrix::from_fn(n, n, |i, j| {
        let k = (5 * i + 3 * j) as f64;
        Complex64::new((k * 0.9).sin(), (k * 0.4).cos() * 0.3)
    });
    let eigenvalues = sorted_eigenvalues(&m).unwrap();
    assert_eq!(eigenvalues.len(), n);

    // normalization: the polynomial's typical magnitude away from roots
    let probe = char_poly_at(&m, Complex64::new(3.0, 3.0)).abs();
    for &ev in &eigenvalues {
        let residual = char_poly_at(&m, ev).abs();
        assert!(residual <= 1e-10 * probe, "lambda={ev}: {residual:e}");
    }

    // the spectrum sums to the trace
    let trace: Complex64 = (0..n).map(|i| m[(i, i)]).sum();
    let sum: Complex64 = eigenvalues.iter().sum();
    assert!((trace - sum).norm() < 1e-10);
}
