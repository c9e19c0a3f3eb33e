//! Hankel-determinant quantization.
//!
//! H_D^d(E) is the determinant of the D x D matrix with entries
//! f_{d+i+k+1}(E). Its roots, tracked over increasing D, converge to the
//! bound states and resonances; the last-step difference |E^[D] - E^[D-1]|
//! serves as the quoted error estimate.

use crate::error::{Error, Result};
use crate::model::PotentialParams;
use crate::numerics::{lu_factor, newton_solve, CMatrix, Cplx, Real};
use crate::riccati::{Parity, RiccatiEngine, RiccatiSeries};

/// Dimension D (>= 2), degree-difference index d (default 0) and parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HankelSpec {
    pub dim: usize,
    pub d: usize,
    pub parity: Parity,
}

impl HankelSpec {
    pub fn new(dim: usize, d: usize, parity: Parity) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "Hankel dimension must be >= 2, got {dim}"
            )));
        }
        Ok(Self { dim, d, parity })
    }

    /// Highest coefficient index consumed: d + 2D - 1.
    pub fn required_order(&self) -> usize {
        self.d + 2 * self.dim - 1
    }
}

fn check_series<T: Real>(series: &RiccatiSeries<T>, spec: &HankelSpec) -> Result<()> {
    if series.order() < spec.required_order() {
        return Err(Error::InsufficientCoefficients {
            needed: spec.required_order(),
            have: series.order(),
        });
    }
    Ok(())
}

fn hankel_matrix<T: Real>(coeffs: &[Cplx<T>], spec: &HankelSpec) -> CMatrix<T> {
    CMatrix::from_fn(spec.dim, |i, k| coeffs[spec.d + i + k + 1].clone())
}

/// H_D^d at the series' trial energy.
pub fn hankel_value<T: Real>(series: &RiccatiSeries<T>, spec: &HankelSpec) -> Result<Cplx<T>> {
    check_series(series, spec)?;
    lu_factor(hankel_matrix(&series.f, spec)).map(|lu| lu.det())
}

/// dH/dE as the sum over rows of determinants with one row replaced by
/// the g-coefficients. O(D^4); used as the fallback and as the
/// independent cross-check for the trace form.
pub fn hankel_de_border<T: Real>(series: &RiccatiSeries<T>, spec: &HankelSpec) -> Result<Cplx<T>> {
    check_series(series, spec)?;
    let g = series.g.as_ref().ok_or(Error::MissingDerivatives)?;
    let zero = series.energy.zero_like();
    let mut total = zero;
    for replaced in 0..spec.dim {
        let matrix = CMatrix::from_fn(spec.dim, |i, k| {
            if i == replaced {
                g[spec.d + i + k + 1].clone()
            } else {
                series.f[spec.d + i + k + 1].clone()
            }
        });
        total += lu_factor(matrix)?.det();
    }
    Ok(total)
}

/// (H, dH/dE) in one pass.
///
/// One LU factorization gives the determinant; the derivative follows
/// from Jacobi's formula dH = H * tr(A^{-1} dA), which costs another
/// O(D^3) in solves. When the matrix is exactly singular the trace form
/// is unavailable and the border-determinant sum is used instead.
pub fn hankel_value_and_de<T: Real>(
    series: &RiccatiSeries<T>,
    spec: &HankelSpec,
) -> Result<(Cplx<T>, Cplx<T>)> {
    check_series(series, spec)?;
    let g = series.g.as_ref().ok_or(Error::MissingDerivatives)?;
    let lu = lu_factor(hankel_matrix(&series.f, spec))?;
    let value = lu.det();
    if lu.is_singular() {
        return Ok((value, hankel_de_border(series, spec)?));
    }
    let mut trace = series.energy.zero_like();
    let mut column = vec![series.energy.zero_like(); spec.dim];
    for k in 0..spec.dim {
        for (i, slot) in column.iter_mut().enumerate() {
            *slot = g[spec.d + i + k + 1].clone();
        }
        lu.solve(&mut column)?;
        trace += column[k].clone();
    }
    let derivative = value.clone() * trace;
    Ok((value, derivative))
}

fn find_root_with_engine<T: Real>(
    engine: &RiccatiEngine<T>,
    spec: &HankelSpec,
    seed: Cplx<T>,
    tol: &T,
    max_iter: usize,
) -> Result<(Cplx<T>, T)> {
    let order = spec.required_order();
    let escape = (seed.abs() + seed.re.lift(1.0)) * seed.re.lift(10.0);
    let result = newton_solve(
        |energy| {
            let magnitude = energy.abs();
            if magnitude > escape {
                return Err(Error::RootDiverged {
                    magnitude: magnitude.to_decimal(),
                    limit: escape.to_decimal(),
                });
            }
            let series = engine.coeffs_with_de(spec.parity, energy, order)?;
            hankel_value_and_de(&series, spec)
        },
        seed,
        tol,
        max_iter,
    )?;
    Ok((result.root, result.residual))
}

/// Newton root of H_D^d(E) from a seed.
///
/// The default iteration budget is 60; roots that wander outside
/// |E| < 10 (|seed| + 1) are rejected as spurious.
pub fn find_root<T: Real>(
    params: &PotentialParams<T>,
    spec: &HankelSpec,
    seed: Cplx<T>,
    tol: &T,
) -> Result<(Cplx<T>, T)> {
    let engine = RiccatiEngine::new(params.clone(), spec.required_order());
    find_root_with_engine(&engine, spec, seed, tol, 60)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceStatus {
    Converged,
    Stagnated,
    Diverged,
}

impl SequenceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SequenceStatus::Converged => "converged",
            SequenceStatus::Stagnated => "stagnated",
            SequenceStatus::Diverged => "diverged",
        }
    }
}

/// One accepted root of the sequence.
#[derive(Clone, Debug)]
pub struct SequencePoint<T: Real> {
    pub dim: usize,
    /// Root with Im normalized to the closed lower half-plane.
    pub energy: Cplx<T>,
    pub residual: T,
}

/// Root sequence E^[D] over increasing determinant dimension.
#[derive(Clone, Debug)]
pub struct HankelSequence<T: Real> {
    pub parity: Parity,
    pub d: usize,
    pub points: Vec<SequencePoint<T>>,
    /// E at the largest successful D.
    pub converged: Cplx<T>,
    /// |E^[D_last] - E^[D_last - 1]|; infinite if only one point exists.
    pub err_estimate: T,
    pub status: SequenceStatus,
}

/// Settings for [`track_sequence`].
#[derive(Clone, Debug)]
pub struct TrackConfig<T: Real> {
    pub d: usize,
    pub d_min: usize,
    pub d_max: usize,
    /// Newton tolerance on the step size.
    pub newton_tol: T,
    /// Sequence tolerance on |E^[D] - E^[D-1]| for convergence.
    pub seq_tol: T,
    pub max_iter: usize,
    /// Stop as soon as the convergence criterion holds.
    pub stop_early: bool,
}

impl<T: Real> TrackConfig<T> {
    pub fn new(d_max: usize, newton_tol: T, seq_tol: T) -> Self {
        Self {
            d: 0,
            d_min: 2,
            d_max,
            newton_tol,
            seq_tol,
            max_iter: 60,
            stop_early: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.d_min < 2 || self.d_min >= self.d_max {
            return Err(Error::InvalidParameter(format!(
                "need 2 <= D_min < D_max, got {}..{}",
                self.d_min, self.d_max
            )));
        }
        Ok(())
    }
}

fn lower_half<T: Real>(root: Cplx<T>) -> Cplx<T> {
    if root.im > root.im.lift(0.0) {
        root.conj()
    } else {
        root
    }
}

fn last_three_monotone<T: Real>(diffs: &[T]) -> bool {
    diffs.len() >= 3 && {
        let n = diffs.len();
        diffs[n - 1] < diffs[n - 2] && diffs[n - 2] < diffs[n - 3]
    }
}

/// Track a root sequence from D_min to D_max, warm-starting each Newton
/// polish at the previous dimension's root.
///
/// A failed polish keeps the previous seed; three consecutive failures
/// mark the sequence diverged. Convergence requires the last-step
/// difference below `seq_tol` with a monotone decrease over the last
/// three steps; anything else is reported as stagnated, never dropped.
pub fn track_sequence<T: Real>(
    params: &PotentialParams<T>,
    parity: Parity,
    config: &TrackConfig<T>,
    seed: Cplx<T>,
) -> Result<HankelSequence<T>> {
    config.validate()?;
    let max_order = config.d + 2 * config.d_max - 1;
    let engine = RiccatiEngine::new(params.clone(), max_order);

    let mut points: Vec<SequencePoint<T>> = Vec::new();
    let mut diffs: Vec<T> = Vec::new();
    let mut warm = seed;
    let mut consecutive_failures = 0usize;
    let mut stopped_early = false;
    let mut last_error: Option<Error> = None;
    let mut diverged = false;

    for dim in config.d_min..=config.d_max {
        let spec = HankelSpec {
            dim,
            d: config.d,
            parity,
        };
        match find_root_with_engine(&engine, &spec, warm.clone(), &config.newton_tol, config.max_iter)
        {
            Ok((root, residual)) => {
                let root = lower_half(root);
                if let Some(previous) = points.last() {
                    diffs.push((root.clone() - &previous.energy).abs());
                }
                points.push(SequencePoint {
                    dim,
                    energy: root.clone(),
                    residual,
                });
                warm = root;
                consecutive_failures = 0;
                if config.stop_early
                    && last_three_monotone(&diffs)
                    && diffs[diffs.len() - 1] <= config.seq_tol
                {
                    stopped_early = true;
                    break;
                }
            }
            Err(error) => {
                consecutive_failures += 1;
                last_error = Some(error);
                if consecutive_failures >= 3 {
                    diverged = true;
                    break;
                }
            }
        }
    }

    let Some(last) = points.last() else {
        return Err(last_error.unwrap_or_else(|| {
            Error::InvalidParameter("sequence produced no accepted roots".into())
        }));
    };

    let err_estimate = diffs
        .last()
        .cloned()
        .unwrap_or_else(|| last.energy.re.lift(f64::INFINITY));
    let status = if diverged {
        SequenceStatus::Diverged
    } else if stopped_early
        || (last_three_monotone(&diffs) && err_estimate <= config.seq_tol)
    {
        SequenceStatus::Converged
    } else {
        SequenceStatus::Stagnated
    };

    Ok(HankelSequence {
        parity,
        d: config.d,
        converged: last.energy.clone(),
        err_estimate,
        status,
        points,
    })
}

/// Scan |H| over a rectangular grid and return local minima as Newton
/// seeds for [`track_sequence`]. An empty result is legal.
#[allow(clippy::too_many_arguments)]
pub fn seed_scan<T: Real>(
    params: &PotentialParams<T>,
    parity: Parity,
    d: usize,
    d_probe: usize,
    re_range: (T, T),
    im_range: (T, T),
    nx: usize,
    ny: usize,
) -> Result<Vec<Cplx<T>>> {
    if nx < 4 || ny < 4 {
        return Err(Error::InvalidParameter(format!(
            "seed grid must be at least 4x4, got {nx}x{ny}"
        )));
    }
    let spec = HankelSpec::new(d_probe.max(2), d, parity)?;
    let engine = RiccatiEngine::new(params.clone(), spec.required_order());

    let re_step = (re_range.1.clone() - &re_range.0) / re_range.0.lift((nx - 1) as f64);
    let im_step = (im_range.1.clone() - &im_range.0) / im_range.0.lift((ny - 1) as f64);

    let mut magnitudes: Vec<Vec<T>> = Vec::with_capacity(ny);
    let mut energies: Vec<Vec<Cplx<T>>> = Vec::with_capacity(ny);
    for iy in 0..ny {
        let mut row_mag = Vec::with_capacity(nx);
        let mut row_energy = Vec::with_capacity(nx);
        for ix in 0..nx {
            let energy = Cplx::new(
                re_range.0.clone() + re_step.clone() * re_step.lift(ix as f64),
                im_range.0.clone() + im_step.clone() * im_step.lift(iy as f64),
            );
            let series = engine.coeffs(parity, &energy, spec.required_order())?;
            let value = hankel_value(&series, &spec)?;
            row_mag.push(value.abs());
            row_energy.push(energy);
        }
        magnitudes.push(row_mag);
        energies.push(row_energy);
    }

    let mut seeds: Vec<Cplx<T>> = Vec::new();
    for iy in 1..ny - 1 {
        for ix in 1..nx - 1 {
            let here = &magnitudes[iy][ix];
            let mut is_minimum = true;
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let neighbor =
                        &magnitudes[(iy as i64 + dy) as usize][(ix as i64 + dx) as usize];
                    if neighbor < here {
                        is_minimum = false;
                    }
                }
            }
            if is_minimum {
                let candidate = energies[iy][ix].clone();
                let duplicate = seeds.iter().any(|existing| {
                    let distance = (existing.clone() - &candidate).abs();
                    let scale = candidate.abs() + candidate.re.lift(1.0);
                    distance <= scale * candidate.re.lift(1e-3)
                });
                if !duplicate {
                    seeds.push(candidate);
                }
            }
        }
    }
    Ok(seeds)
}

/// Relative discrepancy of the scaling identity
/// H_D^d(f~) = gamma^{D(2D+2d+1)} H_D^d(f) with f~_j = gamma^{2j+1} f_j.
pub fn scaling_relation_check<T: Real>(
    series: &RiccatiSeries<T>,
    spec: &HankelSpec,
    gamma: &T,
) -> Result<T> {
    if !(gamma > &gamma.lift(0.0)) || !gamma.is_finite() {
        return Err(Error::InvalidParameter("gamma must be positive".into()));
    }
    check_series(series, spec)?;
    let mut scaled = series.clone();
    for (j, coeff) in scaled.f.iter_mut().enumerate() {
        *coeff = coeff.scale(&crate::numerics::pow_i64(gamma, (2 * j + 1) as i64));
    }
    let plain = hankel_value(series, spec)?;
    let transformed = hankel_value(&scaled, spec)?;
    let exponent = (spec.dim * (2 * spec.dim + 2 * spec.d + 1)) as i64;
    let factor = crate::numerics::pow_i64(gamma, exponent);
    let difference = (transformed.clone() - plain.scale(&factor)).abs();
    let denominator = transformed.abs();
    if denominator.is_zero() {
        return Ok(difference);
    }
    Ok(difference / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riccati::riccati_coeffs_with_de;

    fn params(j: f64, lambda: f64) -> PotentialParams<f64> {
        PotentialParams::degenerate(j, lambda).unwrap()
    }

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn two_by_two_closed_form() {
        let series =
            riccati_coeffs_with_de(&params(0.8, 0.1), Parity::Even, &c(1.1, -0.05), 5).unwrap();
        let spec = HankelSpec::new(2, 0, Parity::Even).unwrap();
        let value = hankel_value(&series, &spec).unwrap();
        let f = &series.f;
        let expected = f[1].clone() * &f[3] - f[2].clone() * &f[2];
        assert!((value.clone() - &expected).abs() < 1e-15 * expected.abs().max(1e-30));

        // product rule on the 2x2 form
        let g = series.g.as_ref().unwrap();
        let (_, de) = hankel_value_and_de(&series, &spec).unwrap();
        let expected_de = g[1].clone() * &f[3] + f[1].clone() * &g[3]
            - (g[2].clone() * &f[2]).scale(&2.0);
        assert!((de.clone() - &expected_de).abs() < 1e-14 * expected_de.abs().max(1e-30));
    }

    #[test]
    fn harmonic_determinant_vanishes_at_eigenvalue() {
        let oscillator = params(0.0, 0.0);
        for dim in 2..6 {
            let spec = HankelSpec::new(dim, 0, Parity::Even).unwrap();
            let series = riccati_coeffs_with_de(
                &oscillator,
                Parity::Even,
                &c(1.0, 0.0),
                spec.required_order(),
            )
            .unwrap();
            let value = hankel_value(&series, &spec).unwrap();
            assert!(value.is_zero(), "D = {dim}");
        }
    }

    #[test]
    fn trace_and_border_derivatives_agree() {
        // determinants at D = 6 sink far below 1, so the comparison runs
        // in big floats where relative accuracy survives
        let digits = 60;
        let big = |x: f64| <rug::Float as Real>::with_digits(digits, x);
        let p = PotentialParams::degenerate(big(0.8), big(0.1)).unwrap();
        let e = Cplx::new(big(1.2), big(-0.3));
        let series = riccati_coeffs_with_de(&p, Parity::Even, &e, 17).unwrap();
        for dim in [2usize, 4, 6] {
            let spec = HankelSpec::new(dim, 1, Parity::Even).unwrap();
            let (_, trace_form) = hankel_value_and_de(&series, &spec).unwrap();
            let border_form = hankel_de_border(&series, &spec).unwrap();
            let err = (trace_form.clone() - &border_form).abs();
            let bound = border_form.abs() * big(1e-50);
            assert!(err <= bound, "D = {dim}, err = {err:e}");
        }
    }

    #[test]
    fn harmonic_root_is_exact() {
        let spec = HankelSpec::new(2, 0, Parity::Even).unwrap();
        let (root, residual) =
            find_root(&params(0.0, 0.0), &spec, c(0.9, 0.0), &1e-13).unwrap();
        assert!((root.re - 1.0).abs() < 1e-12);
        assert!(root.im.abs() < 1e-12);
        assert!(residual.abs() < 1e-20);
    }

    #[test]
    fn insufficient_coefficients_detected() {
        let series =
            riccati_coeffs_with_de(&params(0.8, 0.1), Parity::Even, &c(1.0, 0.0), 3).unwrap();
        let spec = HankelSpec::new(3, 0, Parity::Even).unwrap();
        assert!(matches!(
            hankel_value(&series, &spec),
            Err(Error::InsufficientCoefficients { .. })
        ));
    }

    #[test]
    fn scaling_identity_small_cases() {
        let series =
            riccati_coeffs_with_de(&params(0.8, 0.1), Parity::Even, &c(1.3, -0.2), 11).unwrap();
        for (dim, d, gamma) in [(3usize, 0usize, 2.0f64), (4, 1, 0.5), (2, 0, 1.0)] {
            let spec = HankelSpec::new(dim, d, Parity::Even).unwrap();
            let discrepancy = scaling_relation_check(&series, &spec, &gamma).unwrap();
            assert!(discrepancy < 1e-10, "D={dim} d={d} gamma={gamma}: {discrepancy:e}");
        }
    }

    #[test]
    fn track_harmonic_sequence() {
        let config = TrackConfig::new(8, 1e-12, 1e-12);
        let sequence =
            track_sequence(&params(0.0, 0.0), Parity::Odd, &config, c(2.8, 0.0)).unwrap();
        assert!((sequence.converged.re - 3.0).abs() < 1e-10);
        assert_eq!(sequence.status, SequenceStatus::Converged);
    }

    #[test]
    fn seed_scan_finds_bound_state_region() {
        let seeds = seed_scan(
            &params(0.8, 0.1),
            Parity::Even,
            0,
            6,
            (0.5, 1.5),
            (-0.2, 0.2),
            11,
            5,
        )
        .unwrap();
        assert!(
            seeds
                .iter()
                .any(|s| (s.re - 1.004).abs() < 0.2 && s.im.abs() < 0.2),
            "seeds: {seeds:?}"
        );
    }

    #[test]
    fn spec_validation() {
        assert!(HankelSpec::new(1, 0, Parity::Even).is_err());
        let config = TrackConfig {
            d_min: 5,
            d_max: 4,
            ..TrackConfig::new(4, 1e-10_f64, 1e-10)
        };
        assert!(track_sequence(&params(0.8, 0.1), Parity::Even, &config, c(1.0, 0.0)).is_err());
    }
}
