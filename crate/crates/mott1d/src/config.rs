//! Plain-text run configuration (TOML).
//!
//! One file describes a run: the detector mesh, either an incident
//! energy (stationary solve) or a grid/packet/time block (wave-packet
//! run), and optionally a sweep section. Scalar `beta`, `gamma`,
//! `epsilon` broadcast to all spins; a regular mesh can be given as
//! `spacing` + `offset` instead of an explicit position list.
//!
//! ```toml
//! [detector]
//! n_spins = 2
//! spacing = 0.1
//! beta = 0.5
//! gamma = 3.0
//! epsilon = 0.01
//!
//! [scattering]
//! k0 = 3.141592653589793
//! ```

use serde::Deserialize;

use crate::channelspace::DetectorConfig;
use crate::error::{Error, Result};
use crate::sweep::{Axis, BaseParams, PositionMode, SweepParameter, SweepSpec};
use crate::timedep::{Grid, PacketMode, PacketSpec};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ScalarOrList {
    Scalar(f64),
    List(Vec<f64>),
}

impl ScalarOrList {
    fn broadcast(&self, n: usize, name: &str) -> Result<Vec<f64>> {
        match self {
            ScalarOrList::Scalar(v) => Ok(vec![*v; n]),
            ScalarOrList::List(v) if v.len() == n => Ok(v.clone()),
            ScalarOrList::List(v) => Err(Error::Config(format!(
                "{name} has {} entries for {n} spins",
                v.len()
            ))),
        }
    }
}

fn default_offset() -> f64 {
    0.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetector {
    n_spins: u32,
    positions: Option<Vec<f64>>,
    spacing: Option<f64>,
    #[serde(default = "default_offset")]
    offset: f64,
    beta: ScalarOrList,
    gamma: ScalarOrList,
    epsilon: ScalarOrList,
}

impl RawDetector {
    fn build(&self) -> Result<DetectorConfig> {
        let n = self.n_spins as usize;
        if n == 0 {
            return Err(Error::Config("n_spins must be >= 1".into()));
        }
        let positions = match (&self.positions, self.spacing) {
            (Some(p), None) => {
                if p.len() != n {
                    return Err(Error::Config(format!(
                        "positions has {} entries for {n} spins",
                        p.len()
                    )));
                }
                p.clone()
            }
            (None, Some(d)) => {
                if !(d > 0.0) {
                    return Err(Error::Config(format!("spacing must be > 0, got {d}")));
                }
                (0..n).map(|i| self.offset + i as f64 * d).collect()
            }
            _ => {
                return Err(Error::Config(
                    "detector needs either positions or spacing (not both)".into(),
                ))
            }
        };
        DetectorConfig::new(
            positions,
            self.beta.broadcast(n, "beta")?,
            self.gamma.broadcast(n, "gamma")?,
            self.epsilon.broadcast(n, "epsilon")?,
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScattering {
    k0: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPacket {
    center: f64,
    width: f64,
    k: f64,
    mode: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    /// 0 disables |psi|^2 snapshots.
    #[serde(default)]
    pub snapshot_every: usize,
}

fn default_sample_every() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    parameter: String,
    values: Option<Vec<f64>>,
    range: Option<RawRange>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    start: f64,
    stop: f64,
    count: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPositions {
    mode: String,
    interval: Option<[f64; 2]>,
    min_gap: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    #[serde(default = "default_replicates")]
    replicates: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    axis: Vec<RawAxis>,
    positions: Option<RawPositions>,
}

fn default_replicates() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    detector: Option<RawDetector>,
    scattering: Option<RawScattering>,
    grid: Option<RawGrid>,
    packet: Option<RawPacket>,
    time: Option<TimeConfig>,
    sweep: Option<RawSweep>,
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub detector: Option<DetectorConfig>,
    pub k0: Option<f64>,
    pub grid: Option<Grid>,
    pub packet: Option<PacketSpec>,
    pub time: Option<TimeConfig>,
    pub sweep: Option<SweepSpec>,
}

impl SimConfig {
    pub fn from_str(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let detector = raw.detector.as_ref().map(|d| d.build()).transpose()?;
        let k0 = match &raw.scattering {
            Some(s) => {
                if !(s.k0 > 0.0) || !s.k0.is_finite() {
                    return Err(Error::Config(format!("k0 must be > 0, got {}", s.k0)));
                }
                Some(s.k0)
            }
            None => None,
        };
        let grid = raw
            .grid
            .as_ref()
            .map(|g| Grid::new(g.x_min, g.x_max, g.n_points))
            .transpose()?;
        let packet = raw
            .packet
            .as_ref()
            .map(|p| -> Result<PacketSpec> {
                let mode = match p.mode.as_str() {
                    "left" => PacketMode::Left,
                    "right" => PacketMode::Right,
                    "double" => PacketMode::Double,
                    other => {
                        return Err(Error::Config(format!(
                            "packet mode must be left, right or double, got {other:?}"
                        )))
                    }
                };
                if !(p.width > 0.0) || !p.width.is_finite() {
                    return Err(Error::Config(format!(
                        "packet width must be > 0, got {}",
                        p.width
                    )));
                }
                Ok(PacketSpec {
                    center: p.center,
                    width: p.width,
                    wavenumber: p.k,
                    mode,
                })
            })
            .transpose()?;
        if let Some(t) = &raw.time {
            if !(t.dt > 0.0) || !t.dt.is_finite() {
                return Err(Error::Config(format!("dt must be > 0, got {}", t.dt)));
            }
            if t.sample_every == 0 {
                return Err(Error::Config("sample_every must be >= 1".into()));
            }
        }
        let sweep = raw
            .sweep
            .as_ref()
            .map(|s| build_sweep(s, &raw))
            .transpose()?;
        Ok(Self {
            detector,
            k0,
            grid,
            packet,
            time: raw.time,
            sweep,
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_str(&text)
    }
}

fn build_sweep(s: &RawSweep, raw: &RawConfig) -> Result<SweepSpec> {
    if s.replicates == 0 {
        return Err(Error::Config("replicates must be >= 1".into()));
    }
    let mut axes = Vec::new();
    for a in &s.axis {
        let parameter = match a.parameter.as_str() {
            "k0" => SweepParameter::K0,
            "gamma" => SweepParameter::Gamma,
            "beta" => SweepParameter::Beta,
            "epsilon" => SweepParameter::Epsilon,
            "n_spins" => SweepParameter::NSpins,
            "spacing" => SweepParameter::Spacing,
            "seed" => SweepParameter::Seed,
            other => {
                return Err(Error::Config(format!("unknown sweep parameter {other:?}")))
            }
        };
        let values = match (&a.values, &a.range) {
            (Some(v), None) => v.clone(),
            (None, Some(r)) => {
                if r.count < 2 {
                    return Err(Error::Config("range count must be >= 2".into()));
                }
                (0..r.count)
                    .map(|i| {
                        r.start + (r.stop - r.start) * i as f64 / (r.count - 1) as f64
                    })
                    .collect()
            }
            _ => {
                return Err(Error::Config(
                    "sweep axis needs either values or range (not both)".into(),
                ))
            }
        };
        if values.is_empty() {
            return Err(Error::Config("sweep axis has no values".into()));
        }
        axes.push(Axis { parameter, values });
    }

    let position_mode = match &s.positions {
        None => PositionMode::Regular,
        Some(p) => match p.mode.as_str() {
            "regular" => PositionMode::Regular,
            "random-uniform" => {
                let interval = p.interval.ok_or_else(|| {
                    Error::Config("random-uniform positions need an interval".into())
                })?;
                let min_gap = p.min_gap.ok_or_else(|| {
                    Error::Config("random-uniform positions need min_gap".into())
                })?;
                if !(interval[1] > interval[0]) || !(min_gap > 0.0) {
                    return Err(Error::Config(
                        "random-uniform needs interval[1] > interval[0] and min_gap > 0".into(),
                    ));
                }
                PositionMode::RandomUniform {
                    interval: (interval[0], interval[1]),
                    min_gap,
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "position mode must be regular or random-uniform, got {other:?}"
                )))
            }
        },
    };

    // sweep defaults come from the detector/scattering sections when
    // present; otherwise the reference-table baseline is used
    let mut base = BaseParams::default();
    if let Some(d) = &raw.detector {
        base.n_spins = d.n_spins;
        if let Some(sp) = d.spacing {
            base.spacing = sp;
        }
        base.offset = d.offset;
        if let ScalarOrList::Scalar(v) = d.beta {
            base.beta = v;
        }
        if let ScalarOrList::Scalar(v) = d.gamma {
            base.gamma = v;
        }
        if let ScalarOrList::Scalar(v) = d.epsilon {
            base.epsilon = v;
        }
    }
    if let Some(sc) = &raw.scattering {
        base.k0 = sc.k0;
    }

    Ok(SweepSpec {
        axes,
        position_mode,
        replicates: s.replicates,
        seed: s.seed,
        base,
    })
}
