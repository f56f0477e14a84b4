use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{KFit, PropagationReport, SingularComponent, SmallEnergyWitness};
use crate::experiments::{GradientCheck, NormalFormOracle};
use crate::solver::{HarmonicRecord, RestartProbe};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u8,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub eps: f64,
    pub energy: f64,
    pub dirichlet: f64,
    pub potential_integral: f64,
    pub iterations: usize,
    pub converged: bool,
    pub stalled: bool,
    pub grad_sup: f64,
    pub pde_residual_sup: f64,
    pub sup_norm: f64,
    pub density_integral_gap: f64,
    pub manifold_distance_sup: f64,
    pub stress_div_sup: f64,
    pub stress_div_l2: f64,
    pub bochner_c: Option<f64>,
    pub bochner_nodes: usize,
    pub boundary_normal_sup: f64,
    pub boundary_tangential_sup: f64,
    pub boundary_gradient_sup: f64,
    pub boundary_distance_sup: f64,
    pub near_boundary_distance_sup: f64,
    pub sup_dist: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetProfile {
    pub name: String,
    pub asserted: bool,
    pub values: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSummary {
    pub theta: f64,
    pub scale: f64,
    pub node_count: usize,
    pub components: Vec<SingularComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedStage {
    pub eps: f64,
    pub energy: f64,
    pub converged: bool,
    pub bochner_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementSummary {
    pub h: f64,
    pub interior_nodes: usize,
    pub stages: Vec<RefinedStage>,
    pub k_fit: KFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressSweep {
    pub eps: f64,
    pub grad_tol: f64,
    pub div_sup: f64,
    pub tightened_grad_tol: f64,
    pub tightened_div_sup: f64,
    pub tightened_converged: bool,
    pub tightened_grad_sup: f64,
    pub constant_field_div_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub gradient: GradientCheck,
    pub normal_form: NormalFormOracle,
    pub hedgehog_dirichlet_ratio: f64,
    pub hedgehog_h: f64,
    /// Re-solving the first stage reproduced its field bit for bit.
    pub first_stage_reproduced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub budget_seconds: f64,
    pub gradient_check_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub fast: bool,
    pub potential: String,
    pub h: f64,
    pub interior_nodes: usize,
    pub boundary_nodes: usize,
    pub uniform_bound: f64,
    pub centers: usize,
    pub boundary_centers: usize,
    pub rho: Vec<f64>,
    pub stages: Vec<StageSummary>,
    pub harmonic: HarmonicRecord,
    pub k_fit: KFit,
    pub monotonicity_violations: usize,
    pub propagation: PropagationReport,
    pub witness: SmallEnergyWitness,
    pub singular_set: SingularSummary,
    pub uniform_convergence: Vec<SetProfile>,
    pub refinement: Option<RefinementSummary>,
    pub restart_probe: Option<RestartProbe>,
    pub stress_sweep: StressSweep,
    pub checks: Checks,
    pub criteria: Vec<Criterion>,
    pub timing: Timing,
}

impl RunSummary {
    pub const FILE: &'static str = "summary.json";

    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.status == Status::Pass)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(dir.join(Self::FILE), text)?;
        Ok(())
    }

    /// Reads `summary.json` from a run directory, or the given file itself.
    pub fn read_value(dir: &Path) -> Result<serde_json::Value> {
        let path = if dir.is_file() { dir.to_path_buf() } else { dir.join(Self::FILE) };
        if !path.is_file() {
            return Err(Error::MissingArtifact(path));
        }
        Ok(serde_json::from_str(&std::fs::read_to_string(&path)?)?)
    }
}
