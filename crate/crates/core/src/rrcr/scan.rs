//! Rotation-angle scan, eigenvalue trajectory matching and pole
//! classification.
//!
//! Resonances appear as stabilization plateaus: theta-windows where one
//! eigenvalue trajectory E(theta) is nearly stationary while the rotated
//! continuum sweeps past. Plateaus stabilizing below the critical angle
//! pi/4 and above it belong to two distinct families.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PotentialParams;
use crate::numerics::Real;
use crate::rrcr::basis::{build_rotated_hamiltonian, RotationSetup, THETA_CRIT};
use crate::rrcr::eigen::sorted_eigenvalues;

/// One matched eigenvalue trajectory over the theta grid.
#[derive(Clone, Debug)]
pub struct EigenPath {
    pub values: Vec<Complex64>,
    /// |dE/dtheta| by central differences; entry k belongs to grid
    /// point k + 1. Empty for scans with fewer than three angles.
    pub stability: Vec<f64>,
}

/// Stabilization plateau on one path.
#[derive(Clone, Debug)]
pub struct Plateau {
    pub path_id: usize,
    pub theta_star: f64,
    pub energy: Complex64,
    pub stability_min: f64,
    /// Theta window where the stability stays within 10x its minimum.
    pub window: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct ThetaTrajectory {
    pub thetas: Vec<f64>,
    pub paths: Vec<EigenPath>,
    pub plateaus: Vec<Plateau>,
}

fn build_grid(theta_min: f64, theta_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta_min)
        || theta_max >= std::f64::consts::FRAC_PI_2
        || theta_min > theta_max
    {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= theta_min <= theta_max < pi/2, got [{theta_min}, {theta_max}]"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "theta step must be > 0, got {step}"
        )));
    }
    let mut grid = Vec::new();
    let mut k = 0usize;
    loop {
        let theta = theta_min + k as f64 * step;
        if theta > theta_max + step * 1e-9 {
            break;
        }
        grid.push(theta.min(theta_max));
        k += 1;
    }
    Ok(grid)
}

/// Greedy nearest-neighbor assignment of new eigenvalues to paths, with
/// collisions resolved in order of increasing displacement. Returns the
/// permutation `assignment[path] = index into `new_values``.
fn match_step(previous: &[Complex64], new_values: &[Complex64]) -> Vec<usize> {
    let n = previous.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (p, prev) in previous.iter().enumerate() {
        for (e, new) in new_values.iter().enumerate() {
            pairs.push(((prev - new).norm(), p, e));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut assignment = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut assigned = 0usize;
    for (_, p, e) in pairs {
        if assignment[p] == usize::MAX && !taken[e] {
            assignment[p] = e;
            taken[e] = true;
            assigned += 1;
            if assigned == n {
                break;
            }
        }
    }
    assignment
}

/// Scan theta over a uniform grid, eigensolving the rotated Hamiltonian
/// at each angle and matching trajectories between consecutive angles.
///
/// A matched pair whose displacement exceeds 40 * step * (1 + |E|) counts
/// as unmatched; more than 20% unmatched at any angle aborts the scan
/// (the step is too coarse for the matcher to follow the spectrum).
pub fn theta_scan(
    params: &PotentialParams<f64>,
    n: usize,
    theta_min: f64,
    theta_max: f64,
    step: f64,
    omega: f64,
) -> Result<ThetaTrajectory> {
    let thetas = build_grid(theta_min, theta_max, step)?;

    let mut paths: Vec<Vec<Complex64>> = Vec::new();
    for (idx, &theta) in thetas.iter().enumerate() {
        let setup = RotationSetup::new(params.clone(), theta, n, omega)?;
        let eigenvalues = sorted_eigenvalues(&build_rotated_hamiltonian(&setup)?)?;
        if idx == 0 {
            paths = eigenvalues.into_iter().map(|e| vec![e]).collect();
            continue;
        }
        let previous: Vec<Complex64> = paths.iter().map(|p| *p.last().unwrap()).collect();
        let assignment = match_step(&previous, &eigenvalues);
        let mut unmatched = 0usize;
        for (p, &e) in assignment.iter().enumerate() {
            let displacement = (previous[p] - eigenvalues[e]).norm();
            if displacement > 40.0 * step * (1.0 + previous[p].norm()) {
                unmatched += 1;
            }
        }
        if unmatched * 5 > n {
            return Err(Error::MatchingFailure {
                theta,
                unmatched,
                total: n,
            });
        }
        for (p, &e) in assignment.iter().enumerate() {
            paths[p].push(eigenvalues[e]);
        }
    }

    let paths: Vec<EigenPath> = paths
        .into_iter()
        .map(|values| {
            let stability = if values.len() >= 3 {
                (1..values.len() - 1)
                    .map(|k| (values[k + 1] - values[k - 1]).norm() / (2.0 * step))
                    .collect()
            } else {
                Vec::new()
            };
            EigenPath { values, stability }
        })
        .collect();

    let plateaus = detect_plateaus(&thetas, &paths);
    Ok(ThetaTrajectory {
        thetas,
        paths,
        plateaus,
    })
}

/// Local stability minima expanded to windows where the stability stays
/// within 10x the minimum. Overlapping candidates on one path collapse
/// onto the flattest one.
///
/// A minimum only counts as stabilization if the trajectory is genuinely
/// flat there: the rotated continuum sweeps at |dE/dtheta| ~ 2|E|, so
/// anything above a small fraction of that is just a path pausing between
/// avoided crossings.
fn detect_plateaus(thetas: &[f64], paths: &[EigenPath]) -> Vec<Plateau> {
    let mut plateaus = Vec::new();
    for (path_id, path) in paths.iter().enumerate() {
        let stab = &path.stability;
        if stab.is_empty() {
            continue;
        }
        let mut minima: Vec<usize> = (0..stab.len())
            .filter(|&k| {
                (k == 0 || stab[k] <= stab[k - 1]) && (k + 1 == stab.len() || stab[k] <= stab[k + 1])
            })
            .filter(|&k| stab[k] <= 0.05 * (1.0 + path.values[k + 1].norm()))
            .collect();
        minima.sort_by(|&a, &b| stab[a].partial_cmp(&stab[b]).unwrap());

        let mut windows: Vec<(usize, usize)> = Vec::new();
        for k in minima {
            if windows.iter().any(|&(lo, hi)| lo <= k && k <= hi) {
                continue;
            }
            let ceiling = 10.0 * stab[k].max(1e-300);
            let mut lo = k;
            while lo > 0 && stab[lo - 1] <= ceiling {
                lo -= 1;
            }
            let mut hi = k;
            while hi + 1 < stab.len() && stab[hi + 1] <= ceiling {
                hi += 1;
            }
            windows.push((lo, hi));
            // stability index k sits at grid point k + 1
            plateaus.push(Plateau {
                path_id,
                theta_star: thetas[k + 1],
                energy: path.values[k + 1],
                stability_min: stab[k],
                window: (thetas[lo + 1], thetas[hi + 1]),
            });
        }
    }
    plateaus
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleLabel {
    Bound,
    TypeA,
    TypeB,
}

impl PoleLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PoleLabel::Bound => "bound",
            PoleLabel::TypeA => "type_a",
            PoleLabel::TypeB => "type_b",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodTag {
    Rpm,
    Rr,
}

impl MethodTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::Rpm => "rpm",
            MethodTag::Rr => "rr",
        }
    }
}

/// A classified spectral point from either method.
#[derive(Clone, Debug)]
pub struct ResonanceRecord {
    pub label: PoleLabel,
    pub energy: Complex64,
    pub method: MethodTag,
    pub uncertainty: f64,
    pub theta_star: Option<f64>,
    /// Ordering index within its label family, by increasing real part.
    pub n: Option<usize>,
    /// The plateau window contains the critical angle; the label is then
    /// a forced choice.
    pub straddles_critical: bool,
}

/// Label every plateau: below-threshold stationary points with an
/// imaginary part inside the uncertainty are bound states; the rest split
/// into the two families by which side of pi/4 they stabilize on.
/// Windows straddling pi/4 default to the below-critical family and are
/// flagged.
pub fn classify_poles(
    trajectory: &ThetaTrajectory,
    params: &PotentialParams<f64>,
) -> Vec<ResonanceRecord> {
    let threshold = params.threshold().to_f64();
    let mut records: Vec<ResonanceRecord> = trajectory
        .plateaus
        .iter()
        .map(|plateau| {
            let half_width = (plateau.window.1 - plateau.window.0) / 2.0;
            let uncertainty = plateau.stability_min * half_width;
            let straddles =
                plateau.window.0 < THETA_CRIT && THETA_CRIT < plateau.window.1;
            let label = if plateau.energy.im.abs() <= uncertainty
                && plateau.energy.re < threshold
            {
                PoleLabel::Bound
            } else if plateau.theta_star <= THETA_CRIT || straddles {
                PoleLabel::TypeA
            } else {
                PoleLabel::TypeB
            };
            ResonanceRecord {
                label,
                energy: plateau.energy,
                method: MethodTag::Rr,
                uncertainty,
                theta_star: Some(plateau.theta_star),
                n: None,
                straddles_critical: straddles,
            }
        })
        .collect();

    for label in [PoleLabel::Bound, PoleLabel::TypeA, PoleLabel::TypeB] {
        let mut indices: Vec<usize> = (0..records.len())
            .filter(|&i| records[i].label == label)
            .collect();
        indices.sort_by(|&a, &b| {
            records[a]
                .energy
                .re
                .partial_cmp(&records[b].energy.re)
                .unwrap()
        });
        for (rank, &i) in indices.iter().enumerate() {
            records[i].n = Some(rank);
        }
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(j: f64, lambda: f64) -> PotentialParams<f64> {
        PotentialParams::new(j, lambda).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(build_grid(-0.1, 0.5, 0.01).is_err());
        assert!(build_grid(0.5, 0.1, 0.01).is_err());
        assert!(build_grid(0.1, 1.6, 0.01).is_err());
        assert!(build_grid(0.1, 0.5, 0.0).is_err());
        let grid = build_grid(0.1, 0.2, 0.05).unwrap();
        assert_eq!(grid.len(), 3);
        assert!((grid[2] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn single_point_scan() {
        let trajectory = theta_scan(&params(0.8, 0.1), 6, 0.3, 0.3, 0.005, 1.0).unwrap();
        assert_eq!(trajectory.thetas.len(), 1);
        assert_eq!(trajectory.paths.len(), 6);
        assert!(trajectory.paths.iter().all(|p| p.values.len() == 1));
        assert!(trajectory.paths.iter().all(|p| p.stability.is_empty()));
        assert!(trajectory.plateaus.is_empty());
    }

    #[test]
    fn small_scan_structure() {
        let trajectory = theta_scan(&params(0.8, 0.1), 8, 0.10, 0.20, 0.02, 1.0).unwrap();
        assert_eq!(trajectory.thetas.len(), 6);
        assert_eq!(trajectory.paths.len(), 8);
        for path in &trajectory.paths {
            assert_eq!(path.values.len(), 6);
            assert_eq!(path.stability.len(), 4);
            assert!(path.values.iter().all(|e| e.re.is_finite() && e.im.is_finite()));
        }
    }

    #[test]
    fn matcher_prefers_nearest() {
        let previous = [Complex64::new(0.0, 0.0), Complex64::new(5.0, 0.0)];
        let new_values = [Complex64::new(5.1, 0.0), Complex64::new(0.1, 0.0)];
        let assignment = match_step(&previous, &new_values);
        assert_eq!(assignment, vec![1, 0]);
    }

    #[test]
    fn classification_of_synthetic_plateaus() {
        let trajectory = ThetaTrajectory {
            thetas: vec![],
            paths: vec![],
            plateaus: vec![
                Plateau {
                    path_id: 0,
                    theta_star: 0.70,
                    energy: Complex64::new(9.19, -24.29),
                    stability_min: 0.5,
                    window: (0.65, 0.75),
                },
                Plateau {
                    path_id: 1,
                    theta_star: 0.90,
                    energy: Complex64::new(9.18, -24.26),
                    stability_min: 0.4,
                    window: (0.86, 0.94),
                },
                Plateau {
                    path_id: 2,
                    theta_star: 0.30,
                    energy: Complex64::new(1.004081, -1e-9),
                    stability_min: 1e-6,
                    window: (0.20, 0.40),
                },
            ],
        };
        let records = classify_poles(&trajectory, &params(0.8, 0.1));
        assert_eq!(records[0].label, PoleLabel::TypeA);
        assert!(!records[0].straddles_critical);
        assert_eq!(records[1].label, PoleLabel::TypeB);
        assert_eq!(records[2].label, PoleLabel::Bound);
        assert_eq!(records[2].n, Some(0));
    }

    #[test]
    fn straddling_window_flagged() {
        let trajectory = ThetaTrajectory {
            thetas: vec![],
            paths: vec![],
            plateaus: vec![Plateau {
                path_id: 0,
                theta_star: 0.78,
                energy: Complex64::new(5.0, -2.0),
                stability_min: 0.3,
                window: (0.70, 0.86),
            }],
        };
        let records = classify_poles(&trajectory, &params(0.8, 0.1));
        assert_eq!(records[0].label, PoleLabel::TypeA);
        assert!(records[0].straddles_critical);
    }
}
