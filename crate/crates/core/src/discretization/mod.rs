//! Fields `u: Ω → ℝᵏ` with Dirichlet data on uniform grids over `Ω ⊂ ℝⁿ`
//! (`n = 2, 3`), plus the finite-difference stencils and ball integrals on them.

mod boundary;
mod domain;
mod field;
mod integrals;
pub mod io;
mod stencil;

pub use boundary::BoundaryData;
pub use domain::{build_domain, Domain, DomainKind, DomainSpec, Grid, NodeClass, Point};
pub use field::Field;
pub use integrals::{ball_energy, ball_integral, ball_profile, nodal_energy_density};
pub use stencil::{
    boundary_normal_derivative, discrete_gradient, discrete_laplacian, interpolate, NormalDerivative,
};
