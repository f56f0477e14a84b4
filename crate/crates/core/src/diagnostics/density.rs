use crate::discretization::{nodal_energy_density, Field};
use crate::potentials::{Potential, VacuumManifold};
use crate::{Error, Result};

/// `e_ε(u) = ½|∇u|² + ε⁻² f(u)` per node (zero at exterior nodes), with the
/// edge-based Dirichlet part, so `Σ hⁿ e` equals the discrete energy.
pub fn energy_density(u: &Field, eps: f64, p: &dyn Potential) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    Ok(nodal_energy_density(u, Some((eps, p))))
}

/// `dist(u(x), N)` at active nodes, zero elsewhere.
pub fn distance_to_manifold(u: &Field, m: &dyn VacuumManifold) -> Vec<f64> {
    let dom = u.domain();
    let mut out = vec![0.0; dom.len()];
    for &p in dom.active() {
        out[p] = m.distance(u.value(p).expect("active node"));
    }
    out
}
