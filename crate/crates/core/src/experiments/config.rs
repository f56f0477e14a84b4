use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{CompactSet, KGrid};
use crate::discretization::{BoundaryData, DomainKind, DomainSpec};
use crate::potentials::{make_ginzburg_landau, make_landau_de_gennes, Potential};
use crate::solver::{EpsSchedule, SolverConfig};
use crate::{Error, Result};

/// Grid spacing of the `--fast` preset.
pub const FAST_H: f64 = 1.0 / 12.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    GinzburgLandau { k: usize },
    LandauDeGennes { a: f64, b2: f64, c2: f64 },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Box<dyn Potential>> {
        Ok(match *self {
            PotentialSpec::GinzburgLandau { k } => Box::new(make_ginzburg_landau(k)?),
            PotentialSpec::LandauDeGennes { a, b2, c2 } => Box::new(make_landau_de_gennes(a, b2, c2)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    /// Companion run at `h/2` for the stability checks.
    Finer,
    Off,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Centers {
    Auto(AutoCenters),
    List(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoCenters {
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSet {
    pub name: String,
    pub set: CompactSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    pub centers: Centers,
    /// Smallest profile radius in grid cells.
    pub rho_min_cells: f64,
    /// Largest radius at which margins are tested; profiles extend to twice this.
    pub rho_max: f64,
    pub monotonicity_tolerance: f64,
    pub k_grid: KGrid,
    /// Tube threshold for the Bochner fit; the manifold's tubular radius if absent.
    pub bochner_delta: Option<f64>,
    pub singular_theta: f64,
    pub singular_scale: f64,
    /// The compact on which uniform convergence is asserted.
    pub convergence_set: Option<CompactSet>,
    /// Further compacts, reported only.
    pub extra_sets: Option<Vec<NamedSet>>,
    pub witness_radius: f64,
    /// Seeds for the random-restart probe at the smallest `ε`; empty disables it.
    pub restart_seeds: Vec<u64>,
    pub refinement: Refinement,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            centers: Centers::Auto(AutoCenters::Auto),
            rho_min_cells: 4.0,
            rho_max: 0.5,
            monotonicity_tolerance: 1e-3,
            k_grid: KGrid::default(),
            bochner_delta: None,
            singular_theta: 6.0,
            singular_scale: 0.25,
            convergence_set: None,
            extra_sets: None,
            witness_radius: 0.25,
            restart_seeds: vec![1, 2, 3],
            refinement: Refinement::Finer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub potential: PotentialSpec,
    pub domain: DomainSpec,
    pub boundary: BoundaryData,
    pub schedule: EpsSchedule,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Settings for the harmonic-map limit; `solver` if absent.
    #[serde(default)]
    pub harmonic: Option<SolverConfig>,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    /// Default output directory, relative to the working directory.
    #[serde(default)]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Coarsens to the `--fast` grid spacing (never refines).
    pub fn fast(mut self) -> RunConfig {
        if self.domain.h < FAST_H {
            self.domain.h = FAST_H;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) {
            return bad(format!("name {:?} must be a nonempty file-name-safe string", self.name));
        }
        self.schedule.validate().map_err(|e| Error::Config(format!("schedule: {e}")))?;
        self.solver.validate().map_err(|e| Error::Config(format!("solver: {e}")))?;
        if let Some(h) = &self.harmonic {
            h.validate().map_err(|e| Error::Config(format!("harmonic: {e}")))?;
        }
        let d = &self.diagnostics;
        if !(d.rho_min_cells > 2.0) {
            return bad(format!("diagnostics.rho_min_cells = {} must exceed 2", d.rho_min_cells));
        }
        if !(d.rho_max > 0.0) || !(d.monotonicity_tolerance >= 0.0) {
            return bad("diagnostics.rho_max must be positive and monotonicity_tolerance nonnegative".into());
        }
        if !(d.k_grid.k_min > 0.0 && d.k_grid.ratio > 1.0 && d.k_grid.steps > 0) {
            return bad("diagnostics.k_grid needs k_min > 0, ratio > 1, steps > 0".into());
        }
        if !(d.singular_theta > 0.0) || !(d.singular_scale > 0.0) || !(d.witness_radius > 0.0) {
            return bad("diagnostics.singular_theta, singular_scale and witness_radius must be positive".into());
        }
        if let Centers::List(c) = &d.centers {
            let n = self.domain.lo.len();
            if c.is_empty() || c.iter().any(|x| x.len() != n) {
                return bad(format!("diagnostics.centers must be \"auto\" or a nonempty list of {n}-vectors"));
            }
        }
        Ok(())
    }

    pub fn convergence_set(&self) -> CompactSet {
        self.diagnostics.convergence_set.clone().unwrap_or_else(|| CompactSet::Annulus {
            center: self.domain_center(),
            r_min: 0.3,
            r_max: Some(0.95),
        })
    }

    /// Reported-only compacts: the annulus continued up to the boundary and a
    /// small ball around the domain center.
    pub fn extra_sets(&self) -> Vec<NamedSet> {
        self.diagnostics.extra_sets.clone().unwrap_or_else(|| {
            vec![
                NamedSet {
                    name: "to_boundary".into(),
                    set: CompactSet::Annulus {
                        center: self.domain_center(),
                        r_min: 0.3,
                        r_max: None,
                    },
                },
                NamedSet {
                    name: "core".into(),
                    set: CompactSet::Ball {
                        center: self.domain_center(),
                        radius: 0.1,
                    },
                },
            ]
        })
    }

    pub fn domain_center(&self) -> Vec<f64> {
        match &self.domain.kind {
            DomainKind::Ball { center, .. } => center.clone(),
            DomainKind::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect(),
            DomainKind::Samples { .. } => self.domain.lo.iter().zip(&self.domain.hi).map(|(a, b)| 0.5 * (a + b)).collect(),
        }
    }

    pub fn domain_at(&self, h: f64) -> DomainSpec {
        DomainSpec { h, ..self.domain.clone() }
    }
}
