use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Discretization, ExperimentError};
use crate::geometry::{MeshParams, THETA_MAX_DEG, THETA_MIN_DEG};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    SweepTheta,
    Counting,
    Potential,
    Modes,
    Semiclassical,
    Agmon,
    Verify,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::SweepTheta,
        Experiment::Counting,
        Experiment::Potential,
        Experiment::Modes,
        Experiment::Semiclassical,
        Experiment::Agmon,
        Experiment::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SweepTheta => "sweep_theta",
            Experiment::Counting => "counting",
            Experiment::Potential => "potential",
            Experiment::Modes => "modes",
            Experiment::Semiclassical => "semiclassical",
            Experiment::Agmon => "agmon",
            Experiment::Verify => "verify",
        }
    }
}

impl FromStr for Experiment {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.replace('-', "_");
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == key)
            .ok_or_else(|| ExperimentError::Config(format!("unknown experiment '{s}'")))
    }
}

/// Mesh settings for the reference frame (lengths in ŝ = s tan θ).
fn reference_mesh() -> MeshParams {
    MeshParams { h_near: 0.05, near_left: 0.5, near_right: 0.5, ratio: 1.1, max_size: 1.0, transverse_cells: 12, ..MeshParams::default() }
}

/// Mesh settings for the scaled guide at h = 1; `h_near` is multiplied by
/// h^{2/3}, the width of the ground state on the left of the corner.
fn scaled_mesh() -> MeshParams {
    MeshParams { h_near: 0.05, near_left: 1.0, near_right: 1.0, ratio: 1.1, max_size: 0.5, transverse_cells: 12, ..MeshParams::default() }
}

/// Applies the h^{2/3} scaling of `scaled_mesh` to a discretisation.
pub fn scaled_discretization(base: &Discretization, h: f64) -> Discretization {
    let mut d = base.clone();
    d.mesh.h_near *= h.powf(2.0 / 3.0);
    d.mesh.max_size = d.mesh.max_size.max(d.mesh.h_near);
    d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepThetaConfig {
    pub theta_deg: Vec<f64>,
    pub k: usize,
    /// Truncation in the reference variable ŝ, shared by every θ.
    pub reference_truncation: f64,
    pub disc: Discretization,
}

impl Default for SweepThetaConfig {
    fn default() -> Self {
        Self {
            theta_deg: (1..=17).map(|i| 5.0 * i as f64).collect(),
            k: 6,
            reference_truncation: 60.0,
            disc: Discretization { mesh: reference_mesh(), ..Discretization::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CountingConfig {
    pub theta_deg: f64,
    /// Number of eigenvalues that must be resolved.
    pub k: usize,
    pub truncation: f64,
    /// Eigenvalues closer than this to the threshold are not sought.
    pub e_min: f64,
    pub max_per_slice: usize,
    /// Points of the log-spaced E grid of the staircase file.
    pub grid_points: usize,
    pub disc: Discretization,
}

impl Default for CountingConfig {
    fn default() -> Self {
        Self {
            theta_deg: 5.0,
            k: 12,
            truncation: 1e5,
            e_min: 1e-8,
            max_per_slice: 6,
            grid_points: 400,
            disc: Discretization {
                mesh: MeshParams { ratio: 1.04, max_size: 1e9, transverse_cells: 32, ..MeshParams::default() },
                ..Discretization::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PotentialConfig {
    /// Uniform grid on [x_min, x_max].
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    /// Extra log-spaced points in [10^log_min, 1) to resolve the cusp at 0⁺.
    pub log_points: usize,
    pub log_min: f64,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        Self { x_min: -4.4, x_max: 50.0, points: 1000, log_points: 200, log_min: -12.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModesConfig {
    pub theta_deg: f64,
    pub k: usize,
    pub truncation: f64,
    pub disc: Discretization,
}

impl Default for ModesConfig {
    fn default() -> Self {
        Self {
            theta_deg: 2.5,
            k: 6,
            truncation: 60.0,
            disc: Discretization {
                mesh: MeshParams { h_near: 0.1, transverse_cells: 16, ratio: 1.05, ..MeshParams::default() },
                ..Discretization::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SemiclassicalConfig {
    pub h: Vec<f64>,
    pub k: usize,
    /// Truncation of the scaled guide in x.
    pub truncation: f64,
    pub bo_right: f64,
    pub bo_grid_n: usize,
    pub disc: Discretization,
}

impl Default for SemiclassicalConfig {
    fn default() -> Self {
        Self {
            h: vec![0.2, 0.1],
            k: 3,
            truncation: 6.0,
            bo_right: 15.0,
            bo_grid_n: 2000,
            disc: Discretization { mesh: scaled_mesh(), ..Discretization::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgmonConfig {
    pub h: Vec<f64>,
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    /// None: the grid-verified value from the effective potential.
    pub x1: Option<f64>,
    pub x1_grid_points: usize,
    /// Mass fraction defining the leakage abscissa.
    pub leakage_level: f64,
    pub truncation: f64,
    pub disc: Discretization,
}

impl Default for AgmonConfig {
    fn default() -> Self {
        Self {
            h: vec![0.2, 0.1, 0.05, 0.025],
            eta0: 0.1,
            eta1: 0.1,
            eta2: 0.1,
            x1: None,
            x1_grid_points: 2000,
            leakage_level: 1e-2,
            truncation: 6.0,
            disc: Discretization { mesh: scaled_mesh(), ..Discretization::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EigenvalueCheckConfig {
    pub theta_deg: f64,
    pub truncation: f64,
    pub disc: Discretization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FiberCheckConfig {
    pub theta_deg: f64,
    pub fibers: Vec<u32>,
    pub truncation: f64,
    pub disc: Discretization,
}

impl Default for FiberCheckConfig {
    fn default() -> Self {
        Self { theta_deg: 30.0, fibers: vec![1, 2], truncation: 20.0, disc: Discretization::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SlopeCheckConfig {
    pub theta_deg: Vec<f64>,
    /// Truncation in s (decay lengths beyond the corner are ≈ 1.6).
    pub truncation: f64,
    /// Reference-frame mesh with `h_near`, `near_left`, `near_right` and
    /// `max_size` given in units of tan θ.
    pub disc: Discretization,
}

impl Default for SlopeCheckConfig {
    fn default() -> Self {
        Self {
            theta_deg: vec![4.0, 2.0, 1.0, 0.5],
            truncation: 14.0,
            disc: Discretization {
                mesh: MeshParams {
                    h_near: 0.125,
                    near_left: 3.0,
                    near_right: 3.0,
                    ratio: 1.08,
                    max_size: 100.0,
                    transverse_cells: 16,
                    ..MeshParams::default()
                },
                ..Discretization::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OneDCountingConfig {
    pub theta_deg: f64,
    pub right: f64,
    pub grid_n: usize,
    pub e_min: f64,
    /// Only jumps with E ≤ e_max enter the fit (the law is about E → 0;
    /// the deepest states of the well sit at E ≫ 1).
    pub e_max: f64,
}

impl Default for OneDCountingConfig {
    fn default() -> Self {
        Self { theta_deg: 5.0, right: 1e6, grid_n: 4000, e_min: 1e-8, e_max: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HygieneConfig {
    pub theta_deg: f64,
    pub truncation: f64,
    pub k: usize,
    pub disc: Discretization,
}

impl Default for HygieneConfig {
    fn default() -> Self {
        Self {
            theta_deg: 30.0,
            truncation: 6.0,
            k: 4,
            disc: Discretization {
                mesh: MeshParams { h_near: 0.5, ratio: 1.3, max_size: 2.0, transverse_cells: 3, corner_layers: 2, ..MeshParams::default() },
                ..Discretization::default()
            },
        }
    }
}

/// Settings of the verification suite; each block drives one criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub eigenvalues: EigenvalueCheckConfig,
    pub monotonicity: SweepThetaConfig,
    pub fibers: FiberCheckConfig,
    pub counting: CountingConfig,
    pub counting_1d: OneDCountingConfig,
    pub slope: SlopeCheckConfig,
    pub potential_points: usize,
    pub semiclassical: SemiclassicalConfig,
    pub agmon: AgmonConfig,
    pub hygiene: HygieneConfig,
    /// Criteria to evaluate (1..=10); empty means all.
    pub only: Vec<u32>,
}

impl Default for EigenvalueCheckConfig {
    fn default() -> Self {
        Self {
            theta_deg: 2.5,
            truncation: 60.0,
            disc: Discretization {
                mesh: MeshParams { h_near: 0.05, transverse_cells: 28, ratio: 1.04, ..MeshParams::default() },
                ..Discretization::default()
            },
        }
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            eigenvalues: EigenvalueCheckConfig::default(),
            monotonicity: SweepThetaConfig::default(),
            fibers: FiberCheckConfig::default(),
            counting: CountingConfig::default(),
            counting_1d: OneDCountingConfig::default(),
            slope: SlopeCheckConfig::default(),
            potential_points: 1000,
            semiclassical: SemiclassicalConfig::default(),
            agmon: AgmonConfig::default(),
            hygiene: HygieneConfig::default(),
            only: Vec::new(),
        }
    }
}

/// Everything a run needs; every block has defaults, so `{}` is a valid
/// configuration for any experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct ExperimentConfig {
    /// When present it must name the experiment being run.
    pub experiment: Option<Experiment>,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub sweep_theta: SweepThetaConfig,
    pub counting: CountingConfig,
    pub potential: PotentialConfig,
    pub modes: ModesConfig,
    pub semiclassical: SemiclassicalConfig,
    pub agmon: AgmonConfig,
    pub verify: VerifyConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Fixes the experiment, rejecting a configuration written for another.
    pub fn for_experiment(mut self, experiment: Experiment) -> Result<Self, ExperimentError> {
        match self.experiment {
            Some(e) if e != experiment => Err(ExperimentError::Config(format!(
                "configuration is for '{}', not '{}'",
                e.name(),
                experiment.name()
            ))),
            _ => {
                self.experiment = Some(experiment);
                Ok(self)
            }
        }
    }

    /// Checks the parameters of the selected experiment against the
    /// preconditions of the modules it drives.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        let angle = |deg: f64| -> Result<(), ExperimentError> {
            if (THETA_MIN_DEG..=THETA_MAX_DEG).contains(&deg) {
                Ok(())
            } else {
                bad(format!("aperture {deg}° outside [{THETA_MIN_DEG}°, {THETA_MAX_DEG}°]"))
            }
        };
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        match self.experiment {
            Some(Experiment::SweepTheta) => {
                if self.sweep_theta.theta_deg.is_empty() || self.sweep_theta.k == 0 {
                    return bad("sweep_theta needs angles and k ≥ 1".into());
                }
                self.sweep_theta.theta_deg.iter().try_for_each(|&d| angle(d))
            }
            Some(Experiment::Counting) => {
                let c = &self.counting;
                angle(c.theta_deg)?;
                if c.k < 2 || !(c.e_min > 0.0 && c.e_min < 1.0) || c.grid_points < 2 {
                    return bad("counting needs k ≥ 2, 0 < e_min < 1 and two grid points".into());
                }
                Ok(())
            }
            Some(Experiment::Potential) => {
                let p = &self.potential;
                if !(p.x_min < p.x_max) || p.points < 2 {
                    return bad("potential grid is empty".into());
                }
                Ok(())
            }
            Some(Experiment::Modes) => {
                angle(self.modes.theta_deg)?;
                if self.modes.k == 0 {
                    return bad("modes needs k ≥ 1".into());
                }
                Ok(())
            }
            Some(Experiment::Semiclassical) => {
                if self.semiclassical.h.iter().any(|&h| !(h > 0.0)) || self.semiclassical.k == 0 {
                    return bad("semiclassical needs positive h and k ≥ 1".into());
                }
                Ok(())
            }
            Some(Experiment::Agmon) => {
                let a = &self.agmon;
                if a.h.iter().any(|&h| !(h > 0.0)) || !(a.leakage_level > 0.0 && a.leakage_level < 1.0) {
                    return bad("agmon needs positive h and a level in (0, 1)".into());
                }
                Ok(())
            }
            Some(Experiment::Verify) | None => Ok(()),
        }
    }
}
