use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    bochner_residual, boundary_gradient_report, distance_to_manifold, energy_density, profiles_for_centers,
    stress_tensor, BochnerReport, BoundaryGradientReport, Profile, StressReport,
};
use crate::discretization::{Field, Point};
use crate::potentials::Potential;
use crate::solver::{energy_parts, pde_residual, EnergyParts};
use crate::Result;

/// Single-field diagnostics for one `ε` stage. Quantities comparing stages
/// (fitted `K`, uniform convergence, singular set) are assembled by the caller.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub eps: f64,
    pub energy: EnergyParts,
    /// `Σ hⁿ e` over the grid.
    pub density_integral: f64,
    pub sup_norm: f64,
    pub pde_residual_sup: f64,
    pub pde_residual_l2: f64,
    /// Sup of `dist(u, N)` over active nodes.
    pub manifold_distance_sup: f64,
    pub stress: StressReport,
    pub bochner: BochnerReport,
    pub boundary: BoundaryGradientReport,
    pub profiles: Vec<Profile>,
    #[serde(skip)]
    pub density: Vec<f64>,
    #[serde(skip)]
    pub manifold_distance: Vec<f64>,
}

impl DiagnosticsReport {
    pub fn relative_integral_gap(&self) -> f64 {
        let e = self.energy.total;
        if e == 0.0 {
            self.density_integral.abs()
        } else {
            ((self.density_integral - e) / e).abs()
        }
    }
}

/// Runs every single-field diagnostic on `u`.
pub fn diagnose(
    u: &Field,
    eps: f64,
    p: &dyn Potential,
    centers: &[Point],
    rhos: &[f64],
    bochner_delta: f64,
) -> Result<DiagnosticsReport> {
    let density = energy_density(u, eps, p)?;
    let hn = u.h().powi(u.n() as i32);
    let density_integral = density.iter().sum::<f64>() * hn;
    let (pde_residual_sup, pde_residual_l2) = pde_residual(u, eps, p)?;
    let manifold_distance = distance_to_manifold(u, p.manifold());
    let profiles = if rhos.is_empty() {
        Vec::new()
    } else {
        profiles_for_centers(u, &density, centers, rhos)?
    };
    Ok(DiagnosticsReport {
        eps,
        energy: energy_parts(u, eps, p)?,
        density_integral,
        sup_norm: u.sup_norm(),
        pde_residual_sup,
        pde_residual_l2,
        manifold_distance_sup: manifold_distance.iter().copied().fold(0.0, f64::max),
        stress: stress_tensor(u, eps, p)?,
        bochner: bochner_residual(u, eps, p, bochner_delta)?,
        boundary: boundary_gradient_report(u, eps, p)?,
        profiles,
        density,
        manifold_distance,
    })
}
