//! The 2^N-component wave function on the grid at one instant.

use num_complex::Complex64;

use crate::timedep::grid::Grid;

#[derive(Debug, Clone)]
pub struct WavePacketState {
    pub t: f64,
    pub grid: Grid,
    n_channels: usize,
    /// Channel-major layout: psi[c * n_points + j].
    psi: Vec<Complex64>,
}

impl WavePacketState {
    pub fn new(t: f64, grid: Grid, n_channels: usize, psi: Vec<Complex64>) -> Self {
        assert_eq!(psi.len(), n_channels * grid.n_points);
        Self {
            t,
            grid,
            n_channels,
            psi,
        }
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn channel(&self, c: usize) -> &[Complex64] {
        let m = self.grid.n_points;
        &self.psi[c * m..(c + 1) * m]
    }

    pub(crate) fn replace_amplitudes(&mut self, psi: Vec<Complex64>) {
        assert_eq!(psi.len(), self.psi.len());
        self.psi = psi;
    }

    /// Total norm sum |psi|^2 dx.
    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn normalize(&mut self) {
        let n = self.norm().sqrt();
        for z in &mut self.psi {
            *z /= n;
        }
    }

    /// P_c = sum_j |psi_{c,j}|^2 dx per channel.
    pub fn channel_probabilities(&self) -> Vec<f64> {
        let dx = self.grid.dx();
        (0..self.n_channels)
            .map(|c| self.channel(c).iter().map(|z| z.norm_sqr()).sum::<f64>() * dx)
            .collect()
    }

    /// Channel probabilities aggregated by Hamming weight.
    pub fn weight_probabilities(&self) -> Vec<f64> {
        let n_spins = self.n_channels.trailing_zeros() as usize;
        let mut out = vec![0.0; n_spins + 1];
        for (c, p) in self.channel_probabilities().into_iter().enumerate() {
            out[c.count_ones() as usize] += p;
        }
        out
    }

    /// Mean position weighted by |psi|^2, over all channels.
    pub fn mean_position(&self) -> f64 {
        let dx = self.grid.dx();
        let m = self.grid.n_points;
        let mut num = 0.0;
        for c in 0..self.n_channels {
            for (j, z) in self.channel(c).iter().enumerate() {
                num += z.norm_sqr() * self.grid.point(j);
            }
        }
        let _ = m;
        num * dx / self.norm()
    }
}
