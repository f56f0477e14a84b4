//! Quantities monitored by the analysis of `E_ε`, evaluated on computed fields.
//!
//! * energy density, and the renormalized energy `φ(ρ)` with its monotonicity
//!   function `ψ(ρ) = 2Kρ + φ(ρ)`
//! * the stress-energy tensor and the Bochner residual
//! * the singular set of the limit map and uniform convergence away from it
//! * boundary gradients

mod bochner;
mod boundary;
mod convergence;
mod density;
mod monotonicity;
mod report;
mod singular;
mod small_energy;
mod stress;

pub use bochner::{bochner_residual, BochnerReport, BOCHNER_QUANTILES, DENSITY_FLOOR};
pub use boundary::{boundary_gradient_report, BoundaryGradientReport};
pub use convergence::{uniform_convergence_profile, CompactSet};
pub use density::{distance_to_manifold, energy_density};
pub use monotonicity::{
    fit_k, monotonicity_check, profiles_for_centers, renormalized_profile, rho_grid, KFit, KGrid,
    MarginRow, MonotonicityReport, Profile, RHO_RATIO_STEPS,
};
pub use report::{diagnose, DiagnosticsReport};
pub use singular::{singular_set_estimate, SingularComponent, SingularSet};
pub use small_energy::{
    propagation_check, propagation_threshold, small_energy_witness, PropagationReport, SmallEnergyWitness, WitnessStage, WITNESS_QUANTILE,
};
pub use stress::{stress_tensor, StressReport};
