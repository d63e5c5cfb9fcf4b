//! Flux-weighted channel probabilities and their aggregates.

use crate::error::{Error, Result};
use crate::stationary::solve::ScatteringSolution;

/// Unitarity defect above which a solve is considered unreliable.
pub const UNITARITY_LIMIT: f64 = 1e-6;

/// Per-channel outgoing-flux probabilities and their Hamming-weight
/// aggregates. `p_weight[w]` collects all channels with w excited spins;
/// `p_trk` is the track-detection probability (two or more excitations).
#[derive(Debug, Clone)]
pub struct ChannelProbabilities {
    pub p: Vec<f64>,
    pub p_weight: Vec<f64>,
    pub p_gnd: f64,
    pub p_os: f64,
    pub p_trk: f64,
    pub spin_entropy: f64,
}

/// Shannon entropy with the 0 ln 0 = 0 convention. For a single spin this
/// is exactly -P_exc ln P_exc - P_gnd ln P_gnd.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// |1 - total outgoing flux|. Vanishes for an exact solve with a unit
/// incident wave; closed channels carry no flux.
pub fn unitarity_defect(sol: &ScatteringSolution) -> f64 {
    (1.0 - channel_flux(sol).iter().sum::<f64>()).abs()
}

fn channel_flux(sol: &ScatteringSolution) -> Vec<f64> {
    sol.kinematics
        .iter()
        .enumerate()
        .map(|(c, kin)| {
            if kin.open {
                kin.wavenumber.re / sol.k0
                    * (sol.reflection[c].norm_sqr() + sol.transmission[c].norm_sqr())
            } else {
                0.0
            }
        })
        .collect()
}

/// Aggregate a solution into channel probabilities, rejecting solves whose
/// flux defect exceeds [`UNITARITY_LIMIT`].
pub fn channel_probabilities(sol: &ScatteringSolution) -> Result<ChannelProbabilities> {
    let p = channel_flux(sol);
    let defect = (1.0 - p.iter().sum::<f64>()).abs();
    if !(defect < UNITARITY_LIMIT) {
        return Err(Error::UnitarityViolation {
            defect,
            limit: UNITARITY_LIMIT,
        });
    }
    let n = sol.detector.n_spins() as usize;
    let mut p_weight = vec![0.0; n + 1];
    for (c, &pc) in p.iter().enumerate() {
        p_weight[(c as u64).count_ones() as usize] += pc;
    }
    let p_gnd = p_weight[0];
    let p_os = if n >= 1 { p_weight[1] } else { 0.0 };
    let p_trk = p_weight[2..].iter().sum();
    let spin_entropy = shannon_entropy(&p);
    Ok(ChannelProbabilities {
        p,
        p_weight,
        p_gnd,
        p_os,
        p_trk,
        spin_entropy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channelspace::DetectorConfig;
    use crate::stationary::solve::solve_scattering;

    #[test]
    fn free_mesh_probabilities() {
        let det = DetectorConfig::regular(3, 0.1, 0.0, 0.0, 0.0, 0.01).unwrap();
        let sol = solve_scattering(&det, 1.3).unwrap();
        assert!(unitarity_defect(&sol) < 1e-12);
        let probs = channel_probabilities(&sol).unwrap();
        assert!((probs.p_gnd - 1.0).abs() < 1e-12);
        assert!(probs.spin_entropy.abs() < 1e-10);
    }

    #[test]
    fn decomposition_sums_to_one() {
        let det = DetectorConfig::regular(4, 0.1, 0.0, 0.5, 3.0, 0.01).unwrap();
        let sol = solve_scattering(&det, std::f64::consts::PI).unwrap();
        let probs = channel_probabilities(&sol).unwrap();
        assert!((probs.p_gnd + probs.p_os + probs.p_trk - 1.0).abs() < 1e-8);
        assert!(probs.p.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn entropy_conventions() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]), 0.0);
        let two = shannon_entropy(&[0.5, 0.5]);
        assert!((two - std::f64::consts::LN_2).abs() < 1e-15);
    }
}
