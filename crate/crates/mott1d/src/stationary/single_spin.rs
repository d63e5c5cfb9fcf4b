//! Closed-form scattering on a single spin-1/2 atom.
//!
//! A unit plane wave comes in from the left in the ground channel; the
//! four outgoing amplitudes follow from continuity and the derivative
//! jump at the atom, with k1 = sqrt(k0^2 - epsilon) the excited-channel
//! wavenumber.

use num_complex::Complex64;

use crate::channelspace::channel_wavenumber;
use crate::error::{Error, Result};

/// Amplitudes of the single-spin stationary solution.
///
/// `r0`/`t0` are reflection/transmission in the ground channel, `r1`/`t1`
/// in the excited channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleSpinCoefficients {
    pub r0: Complex64,
    pub t0: Complex64,
    pub r1: Complex64,
    pub t1: Complex64,
    pub k0: f64,
    pub k1: Complex64,
}

impl SingleSpinCoefficients {
    /// Total outgoing flux over incoming flux; 1 for an exact solution
    /// when both channels are open.
    pub fn flux_sum(&self) -> f64 {
        let ground = self.r0.norm_sqr() + self.t0.norm_sqr();
        let excited = if self.k1.im == 0.0 {
            self.k1.re / self.k0 * (self.r1.norm_sqr() + self.t1.norm_sqr())
        } else {
            0.0
        };
        ground + excited
    }
}

/// Closed-form amplitudes for a spin at the origin.
pub fn solve_single_spin(
    k0: f64,
    beta: f64,
    gamma: f64,
    eps: f64,
) -> Result<SingleSpinCoefficients> {
    if !(k0 > 0.0) {
        return Err(Error::Config(format!("k0 must be > 0, got {k0}")));
    }
    let k1 = channel_wavenumber(k0 * k0, eps)?.wavenumber;
    let i = Complex64::I;
    let two_ik0 = 2.0 * i * k0;
    let two_ik1 = 2.0 * i * k1;
    let denom = (beta - two_ik0) * (beta - two_ik1) - gamma * gamma;
    let r1 = two_ik0 * gamma / denom;
    Ok(SingleSpinCoefficients {
        r0: (two_ik1 * beta - beta * beta + gamma * gamma) / denom,
        t0: -two_ik0 * (beta - two_ik1) / denom,
        r1,
        t1: r1,
        k0,
        k1,
    })
}

/// Probability of leaving the spin excited: (k1/k0)(|R1|^2 + |T1|^2).
pub fn single_spin_excitation_probability(
    k0: f64,
    beta: f64,
    gamma: f64,
    eps: f64,
) -> Result<f64> {
    if !(k0 > 0.0) {
        return Err(Error::Config(format!("k0 must be > 0, got {k0}")));
    }
    let e = k0 * k0;
    if e <= eps {
        return Err(Error::ClosedChannel {
            energy: e,
            threshold: eps,
        });
    }
    let k1 = channel_wavenumber(e, eps)?.wavenumber.re;
    let g2 = gamma * gamma;
    let b2 = beta * beta;
    let num = 8.0 * k0 * k1 * g2;
    let den = 4.0 * b2 * (k0 + k1).powi(2) + (4.0 * k0 * k1 - b2 + g2).powi(2);
    Ok(num / den)
}

/// Coupling strength maximizing the excitation probability.
///
/// Found by bracketing plus golden-section search to relative tolerance
/// 1e-9; the free case eps = beta = 0 returns the analytic 2*k0.
pub fn gamma_max(k0: f64, beta: f64, eps: f64) -> Result<f64> {
    if beta == 0.0 && eps == 0.0 {
        if !(k0 > 0.0) {
            return Err(Error::Config(format!("k0 must be > 0, got {k0}")));
        }
        return Ok(2.0 * k0);
    }
    let f = |g: f64| single_spin_excitation_probability(k0, beta, g, eps).unwrap_or(0.0);
    // expand until the maximum is bracketed
    let mut hi = 2.0 * k0.max(1.0);
    while f(hi) >= f(hi / 2.0) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Config(
                "gamma_max bracket expansion failed".into(),
            ));
        }
    }
    let (mut a, mut b) = (0.0, hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 1e-9 * b.abs().max(1.0) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    Ok(0.5 * (a + b))
}
