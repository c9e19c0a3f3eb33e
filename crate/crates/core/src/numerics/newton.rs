//! Damped Newton iteration in the complex plane.

use super::complex::Cplx;
use super::real::Real;
use crate::error::{Error, Result};

const MAX_HALVINGS: usize = 20;

#[derive(Clone, Debug)]
pub struct NewtonResult<T: Real> {
    pub root: Cplx<T>,
    /// |f| at the returned point.
    pub residual: T,
    pub iterations: usize,
}

/// Newton's method with step-halving damping.
///
/// `func` returns `(value, derivative)` at a point. The step is halved up
/// to twenty times while |value| fails to decrease; convergence is
/// declared once |step| <= tol * max(1, |z|). The determinant values this
/// drives span hundreds of orders of magnitude, but only the scale-free
/// ratio value/derivative enters the step.
pub fn newton_solve<T, F>(
    mut func: F,
    seed: Cplx<T>,
    tol: &T,
    max_iter: usize,
) -> Result<NewtonResult<T>>
where
    T: Real,
    F: FnMut(&Cplx<T>) -> Result<(Cplx<T>, Cplx<T>)>,
{
    if !(tol > &tol.lift(0.0)) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }

    let one = tol.lift(1.0);
    let mut z = seed;
    let (mut value, mut derivative) = func(&z)?;

    for iteration in 1..=max_iter {
        let value_mag = value.abs();
        if value_mag.is_zero() {
            return Ok(NewtonResult {
                root: z,
                residual: value_mag,
                iterations: iteration - 1,
            });
        }
        if derivative.abs().is_zero() {
            return Err(Error::DerivativeUnderflow {
                iterations: iteration - 1,
                residual: value_mag.to_decimal(),
            });
        }

        let full_step = -(value.clone() / &derivative);
        let scale = {
            let z_mag = z.abs();
            if z_mag > one {
                z_mag
            } else {
                one.clone()
            }
        };
        let converged = full_step.abs() <= tol.clone() * &scale;

        let mut step = full_step.clone();
        let mut trial = z.clone() + &step;
        let (mut trial_value, mut trial_derivative) = func(&trial)?;
        if !converged {
            let mut halvings = 0;
            while trial_value.abs() >= value_mag && halvings < MAX_HALVINGS {
                step = step.scale(&one.lift(0.5));
                trial = z.clone() + &step;
                let evaluated = func(&trial)?;
                trial_value = evaluated.0;
                trial_derivative = evaluated.1;
                halvings += 1;
            }
            if halvings == MAX_HALVINGS && trial_value.abs() >= value_mag {
                // damping failed to help; take the undamped step and move on
                trial = z.clone() + &full_step;
                let evaluated = func(&trial)?;
                trial_value = evaluated.0;
                trial_derivative = evaluated.1;
            }
        }

        z = trial;
        value = trial_value;
        derivative = trial_derivative;

        if converged {
            return Ok(NewtonResult {
                root: z,
                residual: value.abs(),
                iterations: iteration,
            });
        }
    }

    Err(Error::MaxIterations {
        max_iter,
        residual: value.abs().to_decimal(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn finds_i_for_z_squared_plus_one() {
        let result = newton_solve(
            |z| {
                let value = z.clone() * z + &z.one_like();
                let derivative = z.scale(&2.0);
                Ok((value, derivative))
            },
            c(0.5, 0.8),
            &1e-14,
            50,
        )
        .unwrap();
        assert!((result.root.re).abs() < 1e-12);
        assert!((result.root.im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finds_sqrt_two() {
        let result = newton_solve(
            |z| {
                let value = z.clone() * z - &z.lift(2.0, 0.0);
                let derivative = z.scale(&2.0);
                Ok((value, derivative))
            },
            c(1.0, 0.0),
            &1e-14,
            50,
        )
        .unwrap();
        assert!((result.root.re - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert_eq!(result.root.im, 0.0);
    }

    #[test]
    fn reports_derivative_underflow() {
        // f(z) = 1 with f' = 0 has no root and a vanishing derivative
        let outcome = newton_solve(
            |z| Ok((z.one_like(), z.zero_like())),
            c(1.0, 0.0),
            &1e-12,
            10,
        );
        assert!(matches!(outcome, Err(Error::DerivativeUnderflow { .. })));
    }

    #[test]
    fn reports_max_iterations() {
        // gradient pathologically flat: |step| stays large
        let outcome = newton_solve(
            |z| Ok((z.lift(1.0, 0.0), z.lift(1e-30, 0.0))),
            c(0.0, 0.0),
            &1e-12,
            5,
        );
        assert!(matches!(outcome, Err(Error::MaxIterations { .. })));
    }

    #[test]
    fn big_precision_root() {
        let seed = Cplx::new(
            <rug::Float as Real>::with_digits(80, 1.0),
            <rug::Float as Real>::with_digits(80, 0.0),
        );
        let tol = seed.re.lift(1e-70);
        let result = newton_solve(
            |z| {
                let value = z.clone() * z - &z.lift(2.0, 0.0);
                let derivative = z.scale(&z.re.lift(2.0));
                Ok((value, derivative))
            },
            seed,
            &tol,
            100,
        )
        .unwrap();
        let square = result.root.clone() * &result.root;
        let two = square.re.lift(2.0);
        let bound = square.re.lift(1e-69);
        assert!((square.re - two).abs() < bound);
    }
}
