//! Channel indexing, detector configuration and channel kinematics.
//!
//! A mesh of N spin-1/2 atoms has 2^N joint configurations ("channels").
//! A channel is written in binary with spin 1 as the most significant bit,
//! 1 meaning "up" (excited). For N = 6, c = 53 = 110101 has spins 3 and 5
//! down and all others up.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance below which an energy counts as sitting on a threshold.
pub const THRESHOLD_DEGENERACY_TOL: f64 = 1e-12;

/// One of the 2^N spin configurations of an N-spin mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelIndex {
    value: u64,
    n_spins: u32,
}

impl ChannelIndex {
    pub fn new(value: u64, n_spins: u32) -> Result<Self> {
        if n_spins == 0 || n_spins >= 64 || value >> n_spins != 0 {
            return Err(Error::InvalidChannel { value, n_spins });
        }
        Ok(Self { value, n_spins })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    /// Whether spin `n` (1-indexed) is up. Spin 1 is the most significant bit.
    pub fn spin_is_up(&self, n: u32) -> bool {
        debug_assert!(n >= 1 && n <= self.n_spins);
        self.value >> (self.n_spins - n) & 1 == 1
    }

    /// The channel obtained by flipping spin `n` (1-indexed).
    pub fn flip_spin(&self, n: u32) -> ChannelIndex {
        debug_assert!(n >= 1 && n <= self.n_spins);
        Self {
            value: self.value ^ (1 << (self.n_spins - n)),
            n_spins: self.n_spins,
        }
    }

    /// Number of excited (up) spins.
    pub fn hamming_weight(&self) -> u32 {
        self.value.count_ones()
    }

    /// The ground channel (all spins down).
    pub fn ground(n_spins: u32) -> Self {
        Self { value: 0, n_spins }
    }
}

impl std::fmt::Display for ChannelIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.n_spins as usize)
    }
}

/// Number of excited spins in channel `c`.
pub fn hamming_weight(c: ChannelIndex) -> u32 {
    c.hamming_weight()
}

/// For each spin n = 1..N, the channel reached by flipping that spin's bit.
/// The channel graph is the N-dimensional hypercube.
pub fn coupled_channels(c: ChannelIndex) -> Vec<(u32, ChannelIndex)> {
    (1..=c.n_spins()).map(|n| (n, c.flip_spin(n))).collect()
}

/// Spin positions and interaction parameters of the detector mesh,
/// in units hbar^2/2m = 1.
///
/// At position y_n the particle scatters elastically with strength beta_n
/// or flips spin n with strength gamma_n, transferring the excitation
/// energy epsilon_n.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    positions: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    epsilon: Vec<f64>,
}

impl DetectorConfig {
    pub fn new(
        positions: Vec<f64>,
        beta: Vec<f64>,
        gamma: Vec<f64>,
        epsilon: Vec<f64>,
    ) -> Result<Self> {
        let n = positions.len();
        if n == 0 {
            return Err(Error::Config("detector needs at least one spin".into()));
        }
        if n >= 64 {
            return Err(Error::Config(format!("{n} spins exceed the 63-spin channel-index range")));
        }
        for (name, v) in [("beta", &beta), ("gamma", &gamma), ("epsilon", &epsilon)] {
            if v.len() != n {
                return Err(Error::Config(format!(
                    "{name} has {} entries for {n} spins",
                    v.len()
                )));
            }
        }
        for w in positions.windows(2) {
            if !(w[1] > w[0]) {
                let spin = positions.iter().position(|&p| p == w[1]).unwrap_or(0);
                return Err(Error::OverlappingSpins { spin: spin + 1 });
            }
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::Config("spin positions must be finite".into()));
        }
        if epsilon.iter().any(|&e| !(e >= 0.0)) {
            return Err(Error::Config("all epsilon_n must be >= 0".into()));
        }
        if beta.iter().chain(&gamma).any(|v| !v.is_finite()) {
            return Err(Error::Config("beta and gamma must be finite".into()));
        }
        Ok(Self {
            positions,
            beta,
            gamma,
            epsilon,
        })
    }

    /// Regular mesh y_n = offset + (n - 1) * spacing with identical spins.
    pub fn regular(
        n_spins: u32,
        spacing: f64,
        offset: f64,
        beta: f64,
        gamma: f64,
        epsilon: f64,
    ) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::Config(format!("spacing must be > 0, got {spacing}")));
        }
        let n = n_spins as usize;
        Self::new(
            (0..n).map(|i| offset + i as f64 * spacing).collect(),
            vec![beta; n],
            vec![gamma; n],
            vec![epsilon; n],
        )
    }

    pub fn n_spins(&self) -> u32 {
        self.positions.len() as u32
    }

    pub fn n_channels(&self) -> usize {
        1 << self.n_spins()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Position of spin `n` (1-indexed).
    pub fn position(&self, n: u32) -> f64 {
        self.positions[(n - 1) as usize]
    }

    pub fn beta(&self, n: u32) -> f64 {
        self.beta[(n - 1) as usize]
    }

    pub fn gamma(&self, n: u32) -> f64 {
        self.gamma[(n - 1) as usize]
    }

    pub fn epsilon(&self, n: u32) -> f64 {
        self.epsilon[(n - 1) as usize]
    }

    pub fn channel(&self, value: u64) -> Result<ChannelIndex> {
        ChannelIndex::new(value, self.n_spins())
    }

    /// All channels in increasing index order.
    pub fn channels(&self) -> impl Iterator<Item = ChannelIndex> + '_ {
        let n = self.n_spins();
        (0..self.n_channels() as u64).map(move |v| ChannelIndex { value: v, n_spins: n })
    }

    /// Shift every spin position by `delta`.
    pub fn translated(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.positions {
            *p += delta;
        }
        out
    }

    /// FNV-1a hash of the raw parameter bits, for output records.
    pub fn hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: f64| {
            for b in x.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for v in [&self.positions, &self.beta, &self.gamma, &self.epsilon] {
            for &x in v.iter() {
                eat(x);
            }
        }
        h
    }
}

/// Total excitation energy of the up spins in channel `c`.
pub fn channel_threshold(c: ChannelIndex, det: &DetectorConfig) -> Result<f64> {
    if c.n_spins() != det.n_spins() {
        return Err(Error::SpinCountMismatch {
            left: c.n_spins(),
            right: det.n_spins(),
        });
    }
    Ok((1..=det.n_spins())
        .filter(|&n| c.spin_is_up(n))
        .map(|n| det.epsilon(n))
        .sum())
}

/// Kinematics of one channel at total energy E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelKinematics {
    pub threshold: f64,
    /// Real positive for an open channel, positive imaginary for a closed
    /// one (evanescent tails decay away from the mesh).
    pub wavenumber: Complex64,
    pub open: bool,
}

/// Branch rule: k_c = sqrt(E - E_c) for E > E_c, i*sqrt(E_c - E) otherwise.
pub fn channel_wavenumber(energy: f64, threshold: f64) -> Result<ChannelKinematics> {
    if !(energy > 0.0) {
        return Err(Error::Config(format!("total energy must be > 0, got {energy}")));
    }
    let gap = energy - threshold;
    if gap.abs() < THRESHOLD_DEGENERACY_TOL * energy.max(1.0) {
        return Err(Error::ThresholdDegeneracy { energy, threshold });
    }
    if gap > 0.0 {
        Ok(ChannelKinematics {
            threshold,
            wavenumber: Complex64::new(gap.sqrt(), 0.0),
            open: true,
        })
    } else {
        Ok(ChannelKinematics {
            threshold,
            wavenumber: Complex64::new(0.0, (-gap).sqrt()),
            open: false,
        })
    }
}

/// Kinematics of every channel of `det` at total energy E.
pub fn all_kinematics(det: &DetectorConfig, energy: f64) -> Result<Vec<ChannelKinematics>> {
    det.channels()
        .map(|c| channel_wavenumber(energy, channel_threshold(c, det)?))
        .collect()
}
