//! Shared argument parsing and the exit-code contract.
//!
//! Exit codes: 0 all requested results converged, 1 invalid input,
//! 2 numerical non-convergence.

use doublewell_core::numerics::Real;
use doublewell_core::{BigComplex, BigParams, BigReal, Error as CoreError};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unparseable values -> exit 1.
    Usage(String),
    /// The computation itself failed -> exit 2.
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::InvalidParameter(_)
            | CoreError::NonSquare { .. }
            | CoreError::InsufficientCoefficients { .. } => CliError::Usage(err.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError::Usage(message)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn parse_big(digits: u32, text: &str) -> CliResult<BigReal> {
    BigReal::parse_with_digits(digits, text)
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("cannot parse number {text:?}")))
}

/// Seed syntax `re` or `re,im`, parsed at working precision.
pub fn parse_seed(digits: u32, text: &str) -> CliResult<BigComplex> {
    let (re, im) = match text.split_once(',') {
        Some((re, im)) => (re.trim(), im.trim()),
        None => (text.trim(), "0"),
    };
    Ok(BigComplex::new(parse_big(digits, re)?, parse_big(digits, im)?))
}

/// Strict parameters: the solver front ends reject the degenerate
/// oscillator limits J = 0 and lambda = 0.
pub fn parse_params(digits: u32, j: &str, lambda: &str) -> CliResult<BigParams> {
    Ok(BigParams::new(
        parse_big(digits, j)?,
        parse_big(digits, lambda)?,
    )?)
}

pub fn parse_params_f64(j: &str, lambda: &str) -> CliResult<doublewell_core::SmallParams> {
    let j: f64 = j
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse number {j:?}")))?;
    let lambda: f64 = lambda
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse number {lambda:?}")))?;
    Ok(doublewell_core::SmallParams::new(j, lambda)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_forms() {
        let real = parse_seed(60, "1.5").unwrap();
        assert_eq!(real.im.to_f64(), 0.0);
        let complex = parse_seed(60, "2.84, -0.0001").unwrap();
        assert!(complex.im.to_f64() < 0.0);
        assert!(parse_seed(60, "abc").is_err());
        assert!(parse_seed(60, "1.0,nan").is_err());
    }

    #[test]
    fn degenerate_params_rejected() {
        assert!(matches!(
            parse_params(60, "0", "0"),
            Err(CliError::Usage(_))
        ));
        assert!(parse_params(60, "0.8", "0.1").is_ok());
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(CliError::Usage(String::new()).code(), 1);
        assert_eq!(CliError::Numeric(String::new()).code(), 2);
        let numeric: CliError = CoreError::MaxIterations {
            max_iter: 3,
            residual: "1".into(),
        }
        .into();
        assert_eq!(numeric.code(), 2);
    }
}
