use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::discretization::{ball_integral, nodal_energy_density, Field};
use crate::{parallel, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularComponent {
    pub size: usize,
    pub centroid: Vec<f64>,
    /// Diagonal of the component's bounding box.
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSet {
    pub theta: f64,
    pub scale: f64,
    pub nodes: Vec<usize>,
    pub components: Vec<SingularComponent>,
}

/// Interior nodes `x` with `r^{2−n} ∫_{B_r(x)} ½|∇u|² > θ`, grouped into
/// face-connected components.
pub fn singular_set_estimate(u_star: &Field, theta: f64, r: f64) -> Result<SingularSet> {
    let dom = u_star.domain();
    let h = dom.h();
    if !(r > 2.0 * h) {
        return Err(Error::UnresolvedRadius { rho: r, h });
    }
    let g = &dom.grid;
    let n = g.n;
    let mut nodes = Vec::new();
    if theta.is_finite() {
        let e = nodal_energy_density(u_star, None);
        let interior = dom.interior();
        let scale = r.powi(2 - n as i32);
        let flags = parallel::map(interior.len(), |i| {
            let x = g.position(interior[i]);
            ball_integral(dom, &e, &x, r).map(|v| scale * v > theta)
        });
        for (i, f) in flags.into_iter().enumerate() {
            if f? {
                nodes.push(interior[i]);
            }
        }
    }
    let mut seen = vec![false; dom.len()];
    let mut selected = vec![false; dom.len()];
    for &p in &nodes {
        selected[p] = true;
    }
    let mut components = Vec::new();
    for &start in &nodes {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut size = 0;
        let mut sum = [0.0; 3];
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        while let Some(p) = queue.pop_front() {
            size += 1;
            let x = g.position(p);
            for d in 0..n {
                sum[d] += x[d];
                lo[d] = lo[d].min(x[d]);
                hi[d] = hi[d].max(x[d]);
            }
            for d in 0..n {
                for s in [-1, 1] {
                    if let Some(q) = g.neighbor(p, d, s) {
                        if selected[q] && !seen[q] {
                            seen[q] = true;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        components.push(SingularComponent {
            size,
            centroid: (0..n).map(|d| sum[d] / size as f64).collect(),
            diameter: (0..n).map(|d| (hi[d] - lo[d]).powi(2)).sum::<f64>().sqrt(),
        });
    }
    Ok(SingularSet {
        theta,
        scale: r,
        nodes,
        components,
    })
}
