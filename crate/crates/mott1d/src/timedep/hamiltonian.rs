//! Finite-difference Hamiltonian on the grid.
//!
//! Per channel: the three-point Laplacian plus the channel threshold.
//! Each Dirac peak becomes a single grid site carrying weight 1/dx:
//! beta_n/dx on the diagonal and gamma_n/dx coupling the channel to its
//! spin-n flipped partner. The operator is Hermitian by construction.

use num_complex::Complex64;

use crate::channelspace::{channel_threshold, DetectorConfig};
use crate::error::Result;
use crate::timedep::grid::Grid;

/// Action of a Hermitian operator, as needed by the Krylov propagator.
pub trait HermitianOp {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

struct SpinSite {
    grid_index: usize,
    beta_over_dx: f64,
    gamma_over_dx: f64,
    /// XOR mask flipping this spin's bit in a channel index.
    flip_mask: usize,
}

/// Block operator over channels x grid points, stored matrix-free.
pub struct GridHamiltonian {
    n_channels: usize,
    n_points: usize,
    inv_dx2: f64,
    thresholds: Vec<f64>,
    sites: Vec<SpinSite>,
    dx: f64,
}

impl GridHamiltonian {
    pub fn new(det: &DetectorConfig, grid: &Grid) -> Result<Self> {
        let indices = grid.spin_indices(det)?;
        let dx = grid.dx();
        let n = det.n_spins();
        let thresholds = det
            .channels()
            .map(|c| channel_threshold(c, det))
            .collect::<Result<Vec<_>>>()?;
        let sites = (1..=n)
            .map(|spin| SpinSite {
                grid_index: indices[(spin - 1) as usize],
                beta_over_dx: det.beta(spin) / dx,
                gamma_over_dx: det.gamma(spin) / dx,
                flip_mask: 1 << (n - spin),
            })
            .collect();
        Ok(Self {
            n_channels: det.n_channels(),
            n_points: grid.n_points,
            inv_dx2: 1.0 / (dx * dx),
            thresholds,
            sites,
            dx,
        })
    }

    /// Free-particle Hamiltonian (single channel, no spins).
    pub fn free(grid: &Grid) -> Self {
        let dx = grid.dx();
        Self {
            n_channels: 1,
            n_points: grid.n_points,
            inv_dx2: 1.0 / (dx * dx),
            thresholds: vec![0.0],
            sites: Vec::new(),
            dx,
        }
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Real energy expectation <psi|H|psi> dx, assuming psi normalized
    /// with the same dx measure.
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let mut hpsi = vec![Complex64::ZERO; psi.len()];
        self.apply(psi, &mut hpsi);
        psi.iter()
            .zip(&hpsi)
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>()
            * self.dx
    }
}

impl HermitianOp for GridHamiltonian {
    fn dim(&self) -> usize {
        self.n_channels * self.n_points
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let m = self.n_points;
        let inv_dx2 = self.inv_dx2;
        for c in 0..self.n_channels {
            let base = c * m;
            let shift = 2.0 * inv_dx2 + self.thresholds[c];
            // hard walls: neighbours beyond the ends are zero
            y[base] = shift * x[base] - inv_dx2 * x[base + 1];
            for j in 1..m - 1 {
                y[base + j] =
                    shift * x[base + j] - inv_dx2 * (x[base + j - 1] + x[base + j + 1]);
            }
            y[base + m - 1] = shift * x[base + m - 1] - inv_dx2 * x[base + m - 2];
        }
        for site in &self.sites {
            for c in 0..self.n_channels {
                let idx = c * m + site.grid_index;
                let partner = (c ^ site.flip_mask) * m + site.grid_index;
                y[idx] += site.beta_over_dx * x[idx] + site.gamma_over_dx * x[partner];
            }
        }
    }
}
