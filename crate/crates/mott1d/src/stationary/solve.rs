//! Dense complex factorization of the matching system.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Factorize, Solve};
use num_complex::Complex64;

use crate::channelspace::{ChannelKinematics, DetectorConfig};
use crate::error::{Error, Result};
use crate::stationary::assemble::{assemble_system, AssembledSystem};

/// Maximum admissible relative residual of the linear solve.
pub const RESIDUAL_LIMIT: f64 = 1e-10;

/// Stationary scattering state: one reflection and one transmission
/// amplitude per channel, plus the interior amplitudes of each
/// inter-spin region (phase-referenced to the region's left edge).
#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    pub energy: f64,
    pub k0: f64,
    pub detector: DetectorConfig,
    pub kinematics: Vec<ChannelKinematics>,
    pub reflection: Vec<Complex64>,
    pub transmission: Vec<Complex64>,
    /// interior[i - 2][c] = (A_{c,i}, B_{c,i}) for region i = 2..=N.
    pub interior: Vec<Vec<(Complex64, Complex64)>>,
    /// Relative residual of the linear solve.
    pub residual: f64,
    /// 1-norm condition estimate of the matching matrix.
    pub condition: f64,
}

/// Hager/Higham 1-norm estimate of ||A^-1||_1 from an LU factorization.
fn inverse_norm1_estimate<S: Solve<Complex64>>(lu: &S, dim: usize) -> f64 {
    let mut x = Array1::<Complex64>::from_elem(dim, Complex64::new(1.0 / dim as f64, 0.0));
    let mut estimate = 0.0;
    for _ in 0..5 {
        let y = match lu.solve(&x) {
            Ok(y) => y,
            Err(_) => return f64::INFINITY,
        };
        let norm1: f64 = y.iter().map(|v| v.norm()).sum();
        if !norm1.is_finite() {
            return f64::INFINITY;
        }
        let xi: Array1<Complex64> = y.map(|v| {
            if v.norm() > 0.0 {
                v / v.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        let z = match lu.solve_h(&xi) {
            Ok(z) => z,
            Err(_) => return f64::INFINITY,
        };
        let (jmax, zmax) = z
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.norm()))
            .fold((0, 0.0), |acc, it| if it.1 > acc.1 { it } else { acc });
        let ztx: f64 = z
            .iter()
            .zip(x.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        estimate = norm1;
        if zmax <= ztx + 1e-16 {
            break;
        }
        x.fill(Complex64::ZERO);
        x[jmax] = Complex64::new(1.0, 0.0);
    }
    estimate
}

fn matrix_norm1(a: &Array2<Complex64>) -> f64 {
    let mut best = 0.0f64;
    for col in a.columns() {
        let s: f64 = col.iter().map(|v| v.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Solve an already assembled (possibly perturbed) matching system.
pub fn solve_assembled(sys: &AssembledSystem) -> Result<ScatteringSolution> {
    let dim = sys.dim();
    let lu = sys
        .matrix()
        .factorize()
        .map_err(|_| Error::SingularSystem {
            condition: f64::INFINITY,
            residual: f64::INFINITY,
        })?;
    let x = lu.solve(sys.rhs()).map_err(|_| Error::SingularSystem {
        condition: f64::INFINITY,
        residual: f64::INFINITY,
    })?;

    let condition = matrix_norm1(sys.matrix()) * inverse_norm1_estimate(&lu, dim);

    // relative residual ||Ax - b|| / ||b||
    let ax = sys.matrix().dot(&x);
    let mut rnorm = 0.0;
    let mut bnorm = 0.0;
    for i in 0..dim {
        rnorm += (ax[i] - sys.rhs()[i]).norm_sqr();
        bnorm += sys.rhs()[i].norm_sqr();
    }
    let residual = (rnorm / bnorm).sqrt();
    if !residual.is_finite() || residual > RESIDUAL_LIMIT {
        return Err(Error::SingularSystem {
            condition,
            residual,
        });
    }

    let layout = sys.layout();
    let n_channels = layout.n_channels;
    let reflection = (0..n_channels).map(|c| x[layout.reflection(c)]).collect();
    let transmission = (0..n_channels)
        .map(|c| x[layout.transmission(c)])
        .collect();
    let interior = (2..=layout.n_spins)
        .map(|region| {
            (0..n_channels)
                .map(|c| (x[layout.interior_a(c, region)], x[layout.interior_b(c, region)]))
                .collect()
        })
        .collect();

    Ok(ScatteringSolution {
        energy: sys.k0 * sys.k0,
        k0: sys.k0,
        detector: sys.detector.clone(),
        kinematics: sys.kinematics().to_vec(),
        reflection,
        transmission,
        interior,
        residual,
        condition,
    })
}

/// Assemble and solve the full N-spin scattering problem at incident
/// wavenumber `k0`.
pub fn solve_scattering(det: &DetectorConfig, k0: f64) -> Result<ScatteringSolution> {
    let sys = assemble_system(det, k0)?;
    solve_assembled(&sys)
}
