//! Time-independent scattering of a plane wave incident from the left on
//! a one-sided spin mesh.

pub mod assemble;
pub mod probabilities;
pub mod single_spin;
pub mod solve;

pub use assemble::{assemble_system, AssembledSystem};
pub use probabilities::{
    channel_probabilities, shannon_entropy, unitarity_defect, ChannelProbabilities,
    UNITARITY_LIMIT,
};
pub use single_spin::{
    gamma_max, single_spin_excitation_probability, solve_single_spin, SingleSpinCoefficients,
};
pub use solve::{solve_assembled, solve_scattering, ScatteringSolution, RESIDUAL_LIMIT};
