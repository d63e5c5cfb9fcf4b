//! Uniform spatial grid with hard-wall (Dirichlet) boundaries.

use crate::channelspace::DetectorConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_max > x_min) || n_points < 3 {
            return Err(Error::Config(format!(
                "grid needs x_max > x_min and at least 3 points, got [{x_min}, {x_max}] with {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    /// Map each spin to its nearest grid index. Every spin must lie
    /// strictly inside the domain and no two spins may share a point.
    pub fn spin_indices(&self, det: &DetectorConfig) -> Result<Vec<usize>> {
        let dx = self.dx();
        let mut indices = Vec::with_capacity(det.positions().len());
        for &y in det.positions() {
            if !(y > self.x_min && y < self.x_max) {
                return Err(Error::SpinOutsideGrid {
                    position: y,
                    x_min: self.x_min,
                    x_max: self.x_max,
                });
            }
            let j = ((y - self.x_min) / dx).round() as usize;
            let j = j.min(self.n_points - 1);
            if j == 0 || j == self.n_points - 1 {
                return Err(Error::SpinOutsideGrid {
                    position: y,
                    x_min: self.x_min,
                    x_max: self.x_max,
                });
            }
            indices.push(j);
        }
        for a in 0..indices.len() {
            for b in a + 1..indices.len() {
                if indices[a] == indices[b] {
                    return Err(Error::SpinCollision {
                        first: a + 1,
                        second: b + 1,
                    });
                }
            }
        }
        Ok(indices)
    }
}
