use serde::{Deserialize, Serialize};

use crate::discretization::{Field, NodeClass};
use crate::potentials::Potential;
use crate::{parallel, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyParts {
    pub total: f64,
    /// `½ ∫ |∇u|²`.
    pub dirichlet: f64,
    /// `ε⁻² ∫ f(u)`.
    pub potential: f64,
}

/// One sweep over the interior: each node's share of the energy and its
/// residual `−Δ_h u + ε⁻² ∇f(u)` per unit volume.
///
/// An interior node owns a quarter of each edge to another interior node and
/// half of each edge to a boundary node, so the shares add up to the energy.
#[derive(Debug, Clone)]
pub(crate) struct Evaluation {
    pub parts: EnergyParts,
    pub share: Vec<f64>,
    pub residual: Vec<f64>,
}

impl Evaluation {
    pub fn new(u: &Field) -> Self {
        let m = u.domain().interior().len();
        Self {
            parts: EnergyParts::default(),
            share: vec![0.0; m],
            residual: vec![0.0; m * u.k()],
        }
    }

    pub fn residual_sup(&self, k: usize) -> f64 {
        let m = self.share.len();
        parallel::max(m, |i| norm(&self.residual[i * k..(i + 1) * k]))
    }

    pub fn residual_l2(&self, k: usize, h_n: f64) -> f64 {
        let m = self.share.len();
        (h_n * parallel::sum(m, |i| sq(&self.residual[i * k..(i + 1) * k]))).sqrt()
    }
}

fn sq(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}

fn norm(v: &[f64]) -> f64 {
    sq(v).sqrt()
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    Ok(())
}

/// With `potential = None` only the Dirichlet part is evaluated.
pub(crate) fn evaluate(u: &Field, potential: Option<(f64, &dyn Potential)>, out: &mut Evaluation) {
    let dom = u.domain();
    let g = &dom.grid;
    let interior = dom.interior();
    let k = u.k();
    let inv_h2 = 1.0 / (g.h * g.h);
    let offsets: Vec<usize> = g.strides.clone();
    let raw = u.raw();
    let partials = parallel::zip_blocks(
        &mut out.share,
        parallel::CHUNK,
        &mut out.residual,
        parallel::CHUNK * k,
        |b, share, res| {
            let mut grad = vec![0.0; k];
            let (mut dir, mut pot) = (0.0, 0.0);
            for (i, w) in share.iter_mut().enumerate() {
                let node = interior[b * parallel::CHUNK + i];
                let u0 = &raw[node * k..(node + 1) * k];
                let r = &mut res[i * k..(i + 1) * k];
                r.iter_mut().for_each(|v| *v = 0.0);
                let mut acc = 0.0;
                for &s in &offsets {
                    for q in [node - s, node + s] {
                        let uq = &raw[q * k..(q + 1) * k];
                        let mut d2 = 0.0;
                        for c in 0..k {
                            let diff = u0[c] - uq[c];
                            r[c] += diff * inv_h2;
                            d2 += diff * diff;
                        }
                        let weight = if dom.class(q) == NodeClass::Interior { 0.25 } else { 0.5 };
                        acc += weight * d2;
                    }
                }
                let e_dir = acc * inv_h2;
                let mut e_pot = 0.0;
                if let Some((eps, p)) = potential {
                    let inv_eps2 = 1.0 / (eps * eps);
                    let f = p.eval_grad_into(u0, &mut grad);
                    for c in 0..k {
                        r[c] += inv_eps2 * grad[c];
                    }
                    e_pot = inv_eps2 * f;
                }
                *w = e_dir + e_pot;
                dir += e_dir;
                pot += e_pot;
            }
            (dir, pot)
        },
    );
    let h_n = g.cell_volume();
    let (mut dir, mut pot) = (0.0, 0.0);
    for (a, b) in partials {
        dir += a;
        pot += b;
    }
    out.parts = EnergyParts {
        total: h_n * (dir + pot),
        dirichlet: h_n * dir,
        potential: h_n * pot,
    };
}

/// Dirichlet and potential parts of `E_ε(u)`.
pub fn energy_parts(u: &Field, eps: f64, p: &dyn Potential) -> Result<EnergyParts> {
    check_eps(eps)?;
    check_dims(u, p)?;
    let mut ev = Evaluation::new(u);
    evaluate(u, Some((eps, p)), &mut ev);
    Ok(ev.parts)
}

pub fn energy(u: &Field, eps: f64, p: &dyn Potential) -> Result<f64> {
    Ok(energy_parts(u, eps, p)?.total)
}

/// `∂E_ε/∂u(x) = hⁿ (−Δ_h u + ε⁻² ∇f(u))` at interior nodes, zero elsewhere.
pub fn energy_gradient(u: &Field, eps: f64, p: &dyn Potential) -> Result<Field> {
    check_eps(eps)?;
    check_dims(u, p)?;
    let mut ev = Evaluation::new(u);
    evaluate(u, Some((eps, p)), &mut ev);
    let k = u.k();
    let h_n = u.domain().grid.cell_volume();
    let mut out = Field::zeros(u.domain_arc().clone(), k);
    for (i, &node) in u.domain().interior().iter().enumerate() {
        for c in 0..k {
            out.at_mut(node)[c] = h_n * ev.residual[i * k + c];
        }
    }
    Ok(out)
}

/// `(sup, L²)` norms of `Δ_h u − ε⁻² ∇f(u)` over interior nodes.
pub fn pde_residual(u: &Field, eps: f64, p: &dyn Potential) -> Result<(f64, f64)> {
    check_eps(eps)?;
    check_dims(u, p)?;
    let mut ev = Evaluation::new(u);
    evaluate(u, Some((eps, p)), &mut ev);
    let k = u.k();
    Ok((ev.residual_sup(k), ev.residual_l2(k, u.domain().grid.cell_volume())))
}

pub(crate) fn check_dims(u: &Field, p: &dyn Potential) -> Result<()> {
    if u.k() != p.dim() {
        return Err(Error::InvalidParameter(format!(
            "field has {} components, potential expects {}",
            u.k(),
            p.dim()
        )));
    }
    Ok(())
}
