use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::discretization::{boundary_normal_derivative, discrete_gradient, Field};
use crate::potentials::Potential;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGradientReport {
    pub eps: f64,
    /// Sup over boundary nodes of `|∂u/∂ν|`.
    pub normal_sup: f64,
    /// Sup over boundary nodes of `|∇u (I − ννᵀ)|`.
    pub tangential_sup: f64,
    /// Sup over boundary nodes of `(|tangential|² + |normal|²)^{1/2}`.
    pub gradient_sup: f64,
    /// Sup of `dist(u, N)` over boundary nodes.
    pub boundary_distance_sup: f64,
    /// Sup of `dist(u, N)` over interior nodes adjacent to a boundary node.
    pub near_boundary_distance_sup: f64,
    /// Boundary nodes where the second-order normal stencil was unavailable.
    pub first_order_nodes: usize,
    #[serde(skip)]
    pub tangential: Vec<f64>,
}

/// Gradient suprema over `∂Ω` for one stage.
pub fn boundary_gradient_report(u: &Field, eps: f64, p: &dyn Potential) -> Result<BoundaryGradientReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let dom = u.domain();
    let g = &dom.grid;
    let n = g.n;
    let m = p.manifold();
    let mut r = BoundaryGradientReport {
        eps,
        normal_sup: 0.0,
        tangential_sup: 0.0,
        gradient_sup: 0.0,
        boundary_distance_sup: 0.0,
        near_boundary_distance_sup: 0.0,
        first_order_nodes: 0,
        tangential: Vec::with_capacity(dom.boundary().len()),
    };
    for (i, &node) in dom.boundary().iter().enumerate() {
        let nd = boundary_normal_derivative(u, node)?;
        if !nd.second_order {
            r.first_order_nodes += 1;
        }
        let normal = nd.value.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nu = DVector::from_column_slice(&dom.boundary_normal(i)[..n]);
        let proj = DMatrix::identity(n, n) - &nu * nu.transpose();
        let tan = (discrete_gradient(u, node)? * proj).norm();
        r.tangential.push(tan);
        r.normal_sup = r.normal_sup.max(normal);
        r.tangential_sup = r.tangential_sup.max(tan);
        r.gradient_sup = r.gradient_sup.max(tan.hypot(normal));
        r.boundary_distance_sup = r.boundary_distance_sup.max(m.distance(u.value(node)?));
        for d in 0..n {
            for s in [-1, 1] {
                if let Some(q) = g.neighbor(node, d, s) {
                    if dom.interior_ordinal(q).is_some() {
                        r.near_boundary_distance_sup = r.near_boundary_distance_sup.max(m.distance(u.value(q)?));
                    }
                }
            }
        }
    }
    Ok(r)
}
