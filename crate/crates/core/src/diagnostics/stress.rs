use serde::{Deserialize, Serialize};

use crate::discretization::{Field, NodeClass};
use crate::potentials::Potential;
use crate::{parallel, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressReport {
    /// Sup over deep-interior nodes of `|∂_ℓ T_ℓj|`.
    pub div_sup: f64,
    /// `(Σ hⁿ |div T|²)^{1/2}` over the same nodes.
    pub div_l2: f64,
    pub nodes_tested: usize,
    /// `T` at interior nodes, `n × n` row-major per node, in interior order.
    #[serde(skip)]
    pub tensor: Vec<f64>,
    /// Nodes whose neighbours are all interior, where the divergence is taken.
    #[serde(skip)]
    pub deep_nodes: Vec<usize>,
    /// `div T` at `deep_nodes`, `n` values per node.
    #[serde(skip)]
    pub divergence: Vec<f64>,
}

/// `T_ℓj = ∂_ℓu·∂_ju − (½|∇u|² + ε⁻² f(u)) δ_ℓj` from central differences at
/// interior nodes, and its central-difference divergence wherever all
/// neighbours are interior.
pub fn stress_tensor(u: &Field, eps: f64, p: &dyn Potential) -> Result<StressReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let dom = u.domain();
    let g = &dom.grid;
    let (n, k, h) = (g.n, u.k(), g.h);
    let interior = dom.interior();
    let inv_eps2 = 1.0 / (eps * eps);
    let nn = n * n;
    let mut tensor = vec![0.0; interior.len() * nn];
    parallel::for_each_block(&mut tensor, parallel::CHUNK * nn, |b, block| {
        let mut grad = vec![0.0; k * n];
        for (i, t) in block.chunks_mut(nn).enumerate() {
            let node = interior[b * parallel::CHUNK + i];
            for d in 0..n {
                let up = u.value(node + g.strides[d]).expect("interior neighbour");
                let um = u.value(node - g.strides[d]).expect("interior neighbour");
                for c in 0..k {
                    grad[c * n + d] = (up[c] - um[c]) / (2.0 * h);
                }
            }
            let e = 0.5 * grad.iter().map(|v| v * v).sum::<f64>()
                + inv_eps2 * p.eval(u.value(node).expect("interior"));
            for l in 0..n {
                for j in 0..n {
                    let mut v: f64 = (0..k).map(|c| grad[c * n + l] * grad[c * n + j]).sum();
                    if l == j {
                        v -= e;
                    }
                    t[l * n + j] = v;
                }
            }
        }
    });
    let deep_nodes: Vec<usize> = interior
        .iter()
        .copied()
        .filter(|&node| {
            (0..n).all(|d| {
                dom.class(node + g.strides[d]) == NodeClass::Interior
                    && dom.class(node - g.strides[d]) == NodeClass::Interior
            })
        })
        .collect();
    let t_at = |node: usize| {
        let i = dom.interior_ordinal(node).expect("interior node");
        &tensor[i * nn..(i + 1) * nn]
    };
    let mut divergence = vec![0.0; deep_nodes.len() * n];
    for (i, &node) in deep_nodes.iter().enumerate() {
        for l in 0..n {
            let tp = t_at(node + g.strides[l]);
            let tm = t_at(node - g.strides[l]);
            for j in 0..n {
                divergence[i * n + j] += (tp[l * n + j] - tm[l * n + j]) / (2.0 * h);
            }
        }
    }
    let norms: Vec<f64> = divergence
        .chunks(n)
        .map(|v| v.iter().map(|a| a * a).sum::<f64>().sqrt())
        .collect();
    let div_sup = norms.iter().copied().fold(0.0, f64::max);
    let div_l2 = (g.cell_volume() * norms.iter().map(|v| v * v).sum::<f64>()).sqrt();
    Ok(StressReport {
        div_sup,
        div_l2,
        nodes_tested: deep_nodes.len(),
        tensor,
        deep_nodes,
        divergence,
    })
}
