//! Assembly of the 2N*2^N matching system for an N-spin mesh.
//!
//! A unit plane wave comes in from the left in the ground channel. The
//! line splits into N+1 regions separated by the spin positions; each
//! channel carries two plane-wave amplitudes per region. Integrating the
//! Schrodinger equation across each Dirac peak gives, per spin and per
//! channel, a continuity equation and a derivative-jump equation, which
//! together close the system.
//!
//! Unknown ordering: R_c (one reflection per channel), then T_c, then for
//! each interior region i = 2..N the pairs (A_{c,i}, B_{c,i}). Interior
//! amplitudes are phase-referenced to the region's left boundary so that
//! evanescent factors never span more than one inter-spin gap.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::channelspace::{all_kinematics, ChannelKinematics, DetectorConfig};
use crate::error::Result;

/// Dense matching system together with the kinematic data needed to
/// interpret its solution.
pub struct AssembledSystem {
    pub(crate) matrix: Array2<Complex64>,
    pub(crate) rhs: Array1<Complex64>,
    pub(crate) detector: DetectorConfig,
    pub(crate) kinematics: Vec<ChannelKinematics>,
    pub(crate) k0: f64,
}

/// Flat indices of the unknowns for a given layout.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    pub n_spins: usize,
    pub n_channels: usize,
}

impl Layout {
    pub fn dim(&self) -> usize {
        2 * self.n_spins * self.n_channels
    }

    pub fn reflection(&self, c: usize) -> usize {
        c
    }

    pub fn transmission(&self, c: usize) -> usize {
        self.n_channels + c
    }

    /// Right-moving amplitude in interior region i (2..=N).
    pub fn interior_a(&self, c: usize, region: usize) -> usize {
        2 * self.n_channels + (region - 2) * 2 * self.n_channels + c
    }

    /// Left-moving amplitude in interior region i (2..=N).
    pub fn interior_b(&self, c: usize, region: usize) -> usize {
        self.interior_a(c, region) + self.n_channels
    }
}

impl AssembledSystem {
    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    pub(crate) fn layout(&self) -> Layout {
        Layout {
            n_spins: self.detector.n_spins() as usize,
            n_channels: self.detector.n_channels(),
        }
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn rhs(&self) -> &Array1<Complex64> {
        &self.rhs
    }

    /// Mutable access, used by fault-injection tests to corrupt the system.
    pub fn matrix_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.matrix
    }

    pub fn kinematics(&self) -> &[ChannelKinematics] {
        &self.kinematics
    }
}

/// Value and derivative of one basis amplitude at position x, as
/// (column, psi contribution, psi' contribution).
type Term = (usize, Complex64, Complex64);

/// Plane-wave terms of channel c in the given region, evaluated at x.
/// Returns the unknown terms plus the inhomogeneous (incident-wave)
/// value/derivative pair.
fn wave_at(
    layout: &Layout,
    det: &DetectorConfig,
    kin: &[ChannelKinematics],
    k0: f64,
    region: usize,
    c: usize,
    x: f64,
    terms: &mut Vec<Term>,
    inhom: &mut (Complex64, Complex64),
) {
    let i = Complex64::I;
    let k = kin[c].wavenumber;
    let n = layout.n_spins;
    if region == 1 {
        // incident wave lives in the ground channel only
        if c == 0 {
            let ph = (i * k0 * x).exp();
            inhom.0 += ph;
            inhom.1 += i * k0 * ph;
        }
        let ph = (-i * k * x).exp();
        terms.push((layout.reflection(c), ph, -i * k * ph));
    } else if region == n + 1 {
        let ph = (i * k * x).exp();
        terms.push((layout.transmission(c), ph, i * k * ph));
    } else {
        // local phase reference: left edge of the region
        let left = det.positions()[region - 2];
        let pha = (i * k * (x - left)).exp();
        let phb = (-i * k * (x - left)).exp();
        terms.push((layout.interior_a(c, region), pha, i * k * pha));
        terms.push((layout.interior_b(c, region), phb, -i * k * phb));
    }
}

/// Build the dense matching system for `det` at incident wavenumber `k0`.
///
/// Rows come in (continuity, jump) pairs, ordered by spin then channel.
pub fn assemble_system(det: &DetectorConfig, k0: f64) -> Result<AssembledSystem> {
    let energy = k0 * k0;
    let kin = all_kinematics(det, energy)?;
    let n = det.n_spins() as usize;
    let n_channels = det.n_channels();
    let layout = Layout {
        n_spins: n,
        n_channels,
    };
    let dim = layout.dim();
    let mut matrix = Array2::<Complex64>::zeros((dim, dim));
    let mut rhs = Array1::<Complex64>::zeros(dim);

    let mut terms: Vec<Term> = Vec::with_capacity(4);
    for spin in 1..=n as u32 {
        let y = det.position(spin);
        let beta = det.beta(spin);
        let gamma = det.gamma(spin);
        for c in 0..n_channels {
            let ci = det.channel(c as u64)?;
            let flipped = ci.flip_spin(spin).value() as usize;
            let row_cont = 2 * ((spin as usize - 1) * n_channels + c);
            let row_jump = row_cont + 1;

            let mut left = (Complex64::ZERO, Complex64::ZERO);
            let mut right = (Complex64::ZERO, Complex64::ZERO);

            // continuity: psi_R(y) - psi_L(y) = 0
            // jump: psi_R'(y) - psi_L'(y) - beta psi(y) - gamma psi_flip(y) = 0
            terms.clear();
            wave_at(&layout, det, &kin, k0, spin as usize, c, y, &mut terms, &mut left);
            for &(col, v, d) in &terms {
                matrix[(row_cont, col)] -= v;
                matrix[(row_jump, col)] += -d - beta * v;
            }
            terms.clear();
            wave_at(
                &layout,
                det,
                &kin,
                k0,
                spin as usize + 1,
                c,
                y,
                &mut terms,
                &mut right,
            );
            for &(col, v, d) in &terms {
                matrix[(row_cont, col)] += v;
                matrix[(row_jump, col)] += d;
            }
            // coupled channel, evaluated on the left side (continuity makes
            // the side irrelevant)
            terms.clear();
            let mut flip_inhom = (Complex64::ZERO, Complex64::ZERO);
            wave_at(
                &layout,
                det,
                &kin,
                k0,
                spin as usize,
                flipped,
                y,
                &mut terms,
                &mut flip_inhom,
            );
            for &(col, v, _) in &terms {
                matrix[(row_jump, col)] -= gamma * v;
            }

            rhs[row_cont] = left.0 - right.0;
            rhs[row_jump] = left.1 - right.1 + beta * left.0 + gamma * flip_inhom.0;
        }
    }

    Ok(AssembledSystem {
        matrix,
        rhs,
        detector: det.clone(),
        kinematics: kin,
        k0,
    })
}
