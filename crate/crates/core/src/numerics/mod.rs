//! Numeric substrate: scalar abstraction, complex arithmetic, dense LU
//! determinants and damped Newton iteration.

mod complex;
mod linalg;
mod newton;
mod real;

pub use complex::Cplx;
pub use linalg::{det_lu, lu_factor, CMatrix, LuFactors};
pub use newton::{newton_solve, NewtonResult};
pub use real::{pow_i64, PrecisionContext, Real};
