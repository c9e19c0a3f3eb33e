//! Complex-rotation Rayleigh-Ritz lane: oscillator-basis matrices of the
//! rotated Hamiltonian, dense eigensolves, theta scans and pole
//! classification. Runs in double precision; basis size, not arithmetic,
//! limits its accuracy.

pub mod basis;
pub mod eigen;
pub mod scan;

pub use basis::{
    build_companion_hamiltonian, build_rotated_hamiltonian, ho_gaussian_elements,
    ho_kinetic_and_x2, RotationSetup, THETA_CRIT,
};
pub use eigen::{eigensolve_dense, sorted_eigenvalues};
pub use scan::{
    classify_poles, theta_scan, EigenPath, MethodTag, Plateau, PoleLabel, ResonanceRecord,
    ThetaTrajectory,
};
