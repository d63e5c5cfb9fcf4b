//! Time-dependent wave-packet evolution on a spatial grid.

pub mod grid;
pub mod hamiltonian;
pub mod krylov;
pub mod packet;
pub mod state;

pub use grid::Grid;
pub use hamiltonian::{GridHamiltonian, HermitianOp};
pub use krylov::{expm_action, EXPM_TOL};
pub use packet::{PacketMode, PacketSpec};
pub use state::WavePacketState;

use crate::error::Result;

/// Advance the state by `steps` applications of exp(-iH dt).
pub fn propagate<H: HermitianOp>(
    state: &WavePacketState,
    hamiltonian: &H,
    dt: f64,
    steps: usize,
) -> Result<WavePacketState> {
    let mut out = state.clone();
    for _ in 0..steps {
        let psi = expm_action(hamiltonian, out.amplitudes(), dt, EXPM_TOL)?;
        out.replace_amplitudes(psi);
        out.t += dt;
    }
    Ok(out)
}

/// P_c(t) per channel plus Hamming-weight aggregates.
pub fn configuration_probabilities(state: &WavePacketState) -> (Vec<f64>, Vec<f64>) {
    (
        state.channel_probabilities(),
        state.weight_probabilities(),
    )
}
