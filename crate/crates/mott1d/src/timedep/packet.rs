//! Gaussian wave packets in the ground channel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::timedep::grid::Grid;
use crate::timedep::state::WavePacketState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketMode {
    /// Single packet moving towards negative x.
    Left,
    /// Single packet moving towards positive x.
    Right,
    /// Symmetric superposition of a left- and a right-moving packet,
    /// the "emitted at the origin" initial state.
    Double,
}

/// Initial Gaussian envelope exp(-(x-x0)^2 / 4 sigma^2) carrying central
/// wavenumber k, placed in the ground channel and normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub center: f64,
    pub width: f64,
    pub wavenumber: f64,
    pub mode: PacketMode,
}

impl PacketSpec {
    pub fn initial_state(&self, grid: &Grid, n_channels: usize) -> Result<WavePacketState> {
        if !(self.width > 0.0) {
            return Err(Error::Config(format!(
                "packet width must be > 0, got {}",
                self.width
            )));
        }
        let m = grid.n_points;
        let mut psi = vec![Complex64::ZERO; n_channels * m];
        let i = Complex64::I;
        for j in 0..m {
            let x = grid.point(j);
            let envelope = (-(x - self.center).powi(2) / (4.0 * self.width * self.width)).exp();
            let carrier = match self.mode {
                PacketMode::Right => (i * self.wavenumber * x).exp(),
                PacketMode::Left => (-i * self.wavenumber * x).exp(),
                PacketMode::Double => {
                    (i * self.wavenumber * x).exp() + (-i * self.wavenumber * x).exp()
                }
            };
            psi[j] = envelope * carrier;
        }
        let mut state = WavePacketState::new(0.0, *grid, n_channels, psi);
        state.normalize();
        Ok(state)
    }
}
