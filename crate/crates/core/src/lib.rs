//! Numerical laboratory for singular-perturbation energies
//!
//! ```text
//! E_eps(u) = 1/2 ∫ |∇u|² + eps⁻² ∫ f(u),     u = u_b on ∂Ω,  u_b ∈ N = {f = 0}
//! ```
//!
//! The crate minimizes discretizations of `E_eps` on uniform grids and follows the
//! minimizers as `eps → 0` towards a minimizing harmonic map into `N`. The
//! quantities that control that limit are measured in [`diagnostics`].
//!
//! Modules:
//!
//! * [`potentials`]: potentials `f` with their vacuum manifolds, and the
//!   normal-form matrix `A(z)`.
//! * [`discretization`]: domains and fields on uniform grids, with their stencils
//!   and ball integrals.
//! * [`solver`]: Barzilai–Borwein minimization along an eps schedule, and the
//!   harmonic-map limit.
//! * [`diagnostics`]: everything computed on solved fields.
//! * [`experiments`]: configuration-driven runs with comparison and plot output.

pub mod diagnostics;
pub mod discretization;
pub mod error;
pub mod experiments;
pub mod parallel;
pub mod potentials;
pub mod solver;

pub use error::{Error, Result};
