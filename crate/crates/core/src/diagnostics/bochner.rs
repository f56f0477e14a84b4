use serde::{Deserialize, Serialize};

use crate::discretization::{nodal_energy_density, Field, NodeClass};
use crate::potentials::Potential;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BochnerReport {
    pub delta: f64,
    pub qualifying_nodes: usize,
    /// Qualifying nodes skipped because `e ≤ DENSITY_FLOOR`.
    #[serde(default)]
    pub vacuum_nodes: usize,
    /// Smallest `C ≥ 0` with `−Δ_h e ≤ C e²` on all qualifying nodes; `None`
    /// when no node qualifies.
    pub fitted_c: Option<f64>,
    /// Quantiles `(q, value)` of `−Δ_h e / e²` over qualifying nodes with `e > 0`.
    pub quantiles: Vec<(f64, f64)>,
    /// No node of `u` lies within `delta` of `N`.
    pub empty: bool,
}

pub const BOCHNER_QUANTILES: [f64; 4] = [0.1, 0.5, 0.9, 0.99];

/// Densities at or below this are rounding noise of an `N`-valued constant
/// (about `(1e-16 / h)²`); `−Δ_h e / e²` there measures nothing, so such nodes
/// are left out of the fit.
pub const DENSITY_FLOOR: f64 = 1e-20;

/// Fits `C` in `−Δ_h e_ε(u) ≤ C e_ε(u)²` over interior nodes with
/// `dist(u, N) < delta` whose Laplacian stencil stays in the interior and whose
/// density exceeds [`DENSITY_FLOOR`].
pub fn bochner_residual(u: &Field, eps: f64, p: &dyn Potential, delta: f64) -> Result<BochnerReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let dom = u.domain();
    let g = &dom.grid;
    let e = nodal_energy_density(u, Some((eps, p)));
    let m = p.manifold();
    let inv_h2 = 1.0 / (g.h * g.h);
    let mut qualifying = 0;
    let mut vacuum = 0;
    let mut c: f64 = 0.0;
    let mut ratios = Vec::new();
    for &node in dom.interior() {
        let deep = (0..g.n).all(|d| {
            dom.class(node + g.strides[d]) == NodeClass::Interior
                && dom.class(node - g.strides[d]) == NodeClass::Interior
        });
        if !deep || !(m.distance(u.value(node)?) < delta) {
            continue;
        }
        qualifying += 1;
        if e[node] <= DENSITY_FLOOR {
            vacuum += 1;
            continue;
        }
        let mut lap = 0.0;
        for d in 0..g.n {
            lap += (e[node + g.strides[d]] + e[node - g.strides[d]] - 2.0 * e[node]) * inv_h2;
        }
        let r = -lap;
        let ratio = r / (e[node] * e[node]);
        ratios.push(ratio);
        c = c.max(ratio);
    }
    ratios.sort_by(f64::total_cmp);
    let quantiles = if ratios.is_empty() {
        Vec::new()
    } else {
        BOCHNER_QUANTILES
            .iter()
            .map(|&q| {
                let idx = ((q * (ratios.len() - 1) as f64).round() as usize).min(ratios.len() - 1);
                (q, ratios[idx])
            })
            .collect()
    };
    Ok(BochnerReport {
        delta,
        qualifying_nodes: qualifying,
        vacuum_nodes: vacuum,
        fitted_c: (qualifying > 0).then_some(c),
        quantiles,
        empty: qualifying == 0,
    })
}
