use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::energy::{evaluate, Evaluation};
use crate::discretization::Field;
use crate::potentials::VacuumManifold;
use crate::{parallel, Error, Result};

const ARMIJO: f64 = 1e-4;
const MAX_TUBE_HALVINGS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicRecord {
    pub iterations: usize,
    pub converged: bool,
    pub stalled: bool,
    pub initial_dirichlet: f64,
    pub dirichlet: f64,
    /// Sup-norm of the tangential residual `π_tan(−Δ_h u)` per unit volume.
    pub grad_sup: f64,
    /// Largest `dist(u, N)` over interior nodes of the result.
    pub max_manifold_distance: f64,
    /// Interior nodes whose start value had no unique nearest point.
    pub fallback_nodes: usize,
}

/// Projected gradient descent for `½ ∫ |∇u|²` over `N`-valued maps.
///
/// Interior values are first retracted onto `N` (nodes without a unique nearest
/// point get the manifold's reference point). Each step moves along the
/// tangential residual and retracts nodewise by `π`; a step that leaves the
/// tube is halved, and 30 consecutive halvings are an error.
pub fn harmonic_map_minimize(
    u0: &Field,
    m: &dyn VacuumManifold,
    cfg: &SolverConfig,
) -> Result<(Field, HarmonicRecord)> {
    cfg.validate()?;
    let k = u0.k();
    if k != m.ambient_dim() {
        return Err(Error::InvalidParameter("field and manifold dimensions differ".into()));
    }
    let dom = u0.domain_arc().clone();
    let interior = dom.interior();
    let n_int = interior.len();
    let h_n = dom.grid.cell_volume();
    let delta = m.tubular_radius();

    let mut u = u0.clone();
    let mut fallback_nodes = 0;
    let mut q = vec![0.0; k];
    let mut z = vec![0.0; k];
    let reference = m.reference_point();
    for &node in interior {
        let z = u.at(node);
        if m.nearest_point_into(z, &mut q) {
            let d = dist(z, &q);
            if d > delta {
                return Err(Error::OutsideTube { distance: d, radius: delta });
            }
            u.at_mut(node).copy_from_slice(&q);
        } else {
            fallback_nodes += 1;
            u.at_mut(node).copy_from_slice(reference.as_slice());
        }
    }

    let tangential = |u: &Field, ev: &mut Evaluation| {
        for (i, &node) in interior.iter().enumerate() {
            m.project_tangent_at(u.at(node), &mut ev.residual[i * k..(i + 1) * k]);
        }
    };
    let mut ev = Evaluation::new(&u);
    let mut ev_t = Evaluation::new(&u);
    evaluate(&u, None, &mut ev);
    tangential(&u, &mut ev);
    let initial_dirichlet = ev.parts.total;
    let reset_step = dom.h() * dom.h() / (2.0 * dom.n() as f64);
    let mut step = reset_step;
    let mut trial = u.clone();
    let mut iterations = 0;
    let mut stalled = false;
    let mut grad_sup = ev.residual_sup(k);
    let mut converged = grad_sup <= cfg.grad_tol;

    while !converged && iterations < cfg.max_iters {
        let slope = h_n * parallel::sum(n_int * k, |i| ev.residual[i] * ev.residual[i]);
        let mut alpha = step.clamp(cfg.min_step, cfg.max_step);
        let mut tube_halvings = 0;
        let accepted = loop {
            let mut in_tube = true;
            for (i, &node) in interior.iter().enumerate() {
                for c in 0..k {
                    z[c] = u.at(node)[c] - alpha * ev.residual[i * k + c];
                }
                if !m.nearest_point_into(&z, &mut q) || dist(&z, &q) > delta {
                    in_tube = false;
                    break;
                }
                trial.at_mut(node).copy_from_slice(&q);
            }
            if !in_tube {
                tube_halvings += 1;
                if tube_halvings > MAX_TUBE_HALVINGS {
                    return Err(Error::StepLeftTube {
                        halvings: MAX_TUBE_HALVINGS,
                    });
                }
                alpha *= 0.5;
                continue;
            }
            evaluate(&trial, None, &mut ev_t);
            let delta_e = h_n * parallel::sum(n_int, |i| ev_t.share[i] - ev.share[i]);
            if delta_e <= -ARMIJO * alpha * slope {
                break true;
            }
            alpha *= 0.5;
            if alpha < cfg.min_step {
                break false;
            }
        };
        if !accepted {
            stalled = true;
            break;
        }
        iterations += 1;
        tangential(&trial, &mut ev_t);
        // s = u_new − u, y = g_new − g with g the tangential residual
        let mut ss = 0.0;
        let mut sy = 0.0;
        for (i, &node) in interior.iter().enumerate() {
            for c in 0..k {
                let s = trial.at(node)[c] - u.at(node)[c];
                let y = ev_t.residual[i * k + c] - ev.residual[i * k + c];
                ss += s * s;
                sy += s * y;
            }
        }
        step = if sy > 0.0 { ss / sy } else { reset_step };
        std::mem::swap(&mut u, &mut trial);
        std::mem::swap(&mut ev, &mut ev_t);
        grad_sup = ev.residual_sup(k);
        converged = grad_sup <= cfg.grad_tol;
    }
    let max_manifold_distance = interior
        .iter()
        .map(|&node| m.distance(u.at(node)))
        .fold(0.0, f64::max);
    Ok((
        u,
        HarmonicRecord {
            iterations,
            converged,
            stalled,
            initial_dirichlet,
            dirichlet: ev.parts.total,
            grad_sup,
            max_manifold_distance,
            fallback_nodes,
        },
    ))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
