//! One-dimensional cloud-chamber model: a quantum particle coupled to a
//! mesh of N fixed spin-1/2 "detector atoms" through Dirac-peak
//! interactions, in units hbar^2/2m = 1.
//!
//! The joint spin state of the mesh indexes 2^N channels; the particle's
//! wave function has one spatial component per channel. The crate solves
//! the model two ways:
//!
//! * [`stationary`]: a plane wave of energy E = k0^2 incident from the
//!   left on a one-sided mesh, via the closed-form single-spin solution
//!   or a dense 2N*2^N matching system, with flux-weighted channel
//!   probabilities, Hamming-weight aggregates and the spin entropy.
//! * [`timedep`]: wave packets on a spatial grid evolved with a
//!   norm-preserving Krylov approximation of exp(-iH dt).
//!
//! [`config`], [`sweep`] and [`tables`] provide the file formats, the
//! deterministic parameter-sweep engine and the reference-table
//! comparisons used by the `mott1d` command-line tool.

pub mod channelspace;
pub mod config;
pub mod error;
pub mod stationary;
pub mod sweep;
pub mod tables;
pub mod timedep;

pub use error::{Error, Result};
