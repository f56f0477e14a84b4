//! Potentials `f: ℝᵏ → [0, ∞)` and their vacuum manifolds `N = {f = 0}`.
//!
//! A [`Potential`] evaluates `f` with its first two derivatives and owns the
//! [`VacuumManifold`] it vanishes on. Manifolds provide the nearest-point
//! projection `π` on the tube of radius `δ` around them, along with the tangent
//! and normal projectors at `π(z)`.

mod ginzburg_landau;
mod hypotheses;
mod landau_de_gennes;
mod manifold;
mod normal_form;
pub mod qtensor;
pub mod quadrature;

pub use ginzburg_landau::{make_ginzburg_landau, GinzburgLandau};
pub use hypotheses::{verify_hypotheses, HypothesisReport, Violation};
pub use landau_de_gennes::{make_landau_de_gennes, LandauDeGennes};
pub use manifold::{
    estimate_focal_radius, uniaxial_point, ManifoldTag, Sphere, UniaxialQTensors, VacuumManifold,
};
pub use normal_form::{estimate_alpha0, normal_form, normal_form_residual, DEFAULT_QUAD_ORDER};

use std::fmt::Debug;

use nalgebra::{DMatrix, DVector};

/// A smooth nonnegative potential vanishing exactly on its vacuum manifold.
pub trait Potential: Send + Sync + Debug {
    fn name(&self) -> &str;

    /// Target dimension `k`.
    fn dim(&self) -> usize;

    fn eval(&self, z: &[f64]) -> f64;

    fn grad_into(&self, z: &[f64], out: &mut [f64]);

    fn hess(&self, z: &[f64]) -> DMatrix<f64>;

    /// Radius `R` with `∇f(z)·z ≥ 0` whenever `|z| ≥ R`.
    fn radial_growth_radius(&self) -> f64;

    fn manifold(&self) -> &dyn VacuumManifold;

    fn grad(&self, z: &[f64]) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        self.grad_into(z, out.as_mut_slice());
        out
    }

    /// `f(z)` and `∇f(z)` in one call; implementations may share work.
    fn eval_grad_into(&self, z: &[f64], out: &mut [f64]) -> f64 {
        self.grad_into(z, out);
        self.eval(z)
    }

    fn hess_diag_into(&self, z: &[f64], out: &mut [f64]) {
        let h = self.hess(z);
        for (i, o) in out.iter_mut().enumerate() {
            *o = h[(i, i)];
        }
    }
}
