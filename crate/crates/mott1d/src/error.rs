use thiserror::Error;

/// Errors shared by the scattering and wave-packet solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// The total energy sits on a channel threshold; the plane-wave pair
    /// degenerates there and the matching system is singular. Perturb E.
    #[error("energy {energy} is degenerate with channel threshold {threshold}")]
    ThresholdDegeneracy { energy: f64, threshold: f64 },

    /// The excited channel is closed at this energy, so the excitation
    /// probability is zero by definition.
    #[error("excited channel closed: E = {energy} <= threshold {threshold}")]
    ClosedChannel { energy: f64, threshold: f64 },

    #[error("spin positions must be strictly increasing (violated at spin {spin})")]
    OverlappingSpins { spin: usize },

    #[error("matching system is singular or ill-conditioned (condition estimate {condition:.3e}, relative residual {residual:.3e})")]
    SingularSystem { condition: f64, residual: f64 },

    #[error("unitarity defect {defect:.3e} exceeds {limit:.1e}; the solve is unreliable")]
    UnitarityViolation { defect: f64, limit: f64 },

    #[error("spins {first} and {second} map to the same grid point")]
    SpinCollision { first: usize, second: usize },

    #[error("spin position {position} lies outside the grid interior ({x_min}, {x_max})")]
    SpinOutsideGrid {
        position: f64,
        x_min: f64,
        x_max: f64,
    },

    /// The exponential-propagator approximation could not reach its
    /// tolerance at the requested time step; reduce dt.
    #[error("matrix-exponential action did not converge at dt = {dt} (error estimate {estimate:.3e})")]
    ConvergenceFailure { dt: f64, estimate: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid channel index {value} for {n_spins} spins")]
    InvalidChannel { value: u64, n_spins: u32 },

    #[error("mismatched spin counts: {left} vs {right}")]
    SpinCountMismatch { left: u32, right: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
