use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{Method, SolverConfig};
use super::energy::{check_dims, check_eps, evaluate, EnergyParts, Evaluation};
use crate::discretization::Field;
use crate::potentials::Potential;
use crate::{parallel, Error, Result};

const ARMIJO: f64 = 1e-4;
const PRECONDITIONER_REFRESH: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    pub dirichlet_part: f64,
    pub potential_part: f64,
    /// Sup-norm of the residual per unit volume.
    pub grad_norm: f64,
    /// L² norm of `Δ_h u − ε⁻² ∇f(u)`.
    pub pde_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub iterations: usize,
    pub converged: bool,
    /// The line search could not decrease the energy any further.
    pub stalled: bool,
    pub hit_max_iters: bool,
    pub initial_energy: f64,
    pub energy: EnergyParts,
    pub grad_sup: f64,
    pub pde_residual: f64,
    pub backtracks: usize,
    pub trace: Vec<TraceRow>,
}

/// Descends `E_ε` from `u0` over interior values with Barzilai–Borwein steps and
/// a monotone Armijo backtracking safeguard.
///
/// Accepted steps never increase the energy. The sufficient-decrease test uses
/// the sum of per-node energy changes, which is accurate to rounding in the
/// increment rather than in the total; the `energy` column of the trace
/// accumulates these increments from the initial energy. The step length is
/// reset when the curvature estimate `sᵀy` is not positive.
pub fn minimize(u0: &Field, eps: f64, p: &dyn Potential, cfg: &SolverConfig) -> Result<(Field, ConvergenceRecord)> {
    check_eps(eps)?;
    check_dims(u0, p)?;
    cfg.validate()?;
    let dom = u0.domain_arc().clone();
    let interior = dom.interior();
    let k = u0.k();
    let m = interior.len();
    let h_n = dom.grid.cell_volume();
    let diag_lap = 2.0 * dom.n() as f64 / (dom.h() * dom.h());
    let inv_eps2 = 1.0 / (eps * eps);

    let mut u = u0.clone();
    let mut trial = u0.clone();
    let mut ev = Evaluation::new(&u);
    let mut ev_t = Evaluation::new(&u);
    evaluate(&u, Some((eps, p)), &mut ev);
    if !ev.parts.total.is_finite() {
        return Err(Error::Diverged { iteration: 0 });
    }
    let initial_energy = ev.parts.total;

    let mut metric = vec![1.0; m * k];
    let refresh = |u: &Field, metric: &mut Vec<f64>| {
        let mut hd = vec![0.0; k];
        for (i, &node) in interior.iter().enumerate() {
            p.hess_diag_into(u.at(node), &mut hd);
            for c in 0..k {
                metric[i * k + c] = diag_lap + inv_eps2 * hd[c].max(0.0);
            }
        }
    };
    let reset_step = match cfg.method {
        Method::Preconditioned => {
            refresh(&u, &mut metric);
            1.0
        }
        Method::BarzilaiBorwein => {
            // the Laplacian part dominates the spectrum at grid scale
            let mut top: f64 = 0.0;
            let mut hd = vec![0.0; k];
            for &node in interior {
                p.hess_diag_into(u.at(node), &mut hd);
                top = top.max(hd.iter().fold(0.0f64, |a, &b| a.max(b)));
            }
            1.0 / (2.0 * diag_lap + inv_eps2 * top)
        }
    };

    let row = |iter: usize, ev: &Evaluation| TraceRow {
        iter,
        energy: ev.parts.total,
        dirichlet_part: ev.parts.dirichlet,
        potential_part: ev.parts.potential,
        grad_norm: ev.residual_sup(k),
        pde_residual: ev.residual_l2(k, h_n),
    };
    let mut trace = vec![row(0, &ev)];
    let mut tracked = ev.parts.total;
    let mut dir = vec![0.0; m * k];
    let mut step = reset_step;
    let mut backtracks = 0;
    let mut iterations = 0;
    let mut stalled = false;
    let mut converged = trace[0].grad_norm <= cfg.grad_tol;

    while !converged && iterations < cfg.max_iters {
        if cfg.method == Method::Preconditioned && iterations > 0 && iterations % PRECONDITIONER_REFRESH == 0 {
            refresh(&u, &mut metric);
        }
        for i in 0..m * k {
            dir[i] = ev.residual[i] / metric[i];
        }
        let slope = h_n * parallel::sum(m * k, |i| ev.residual[i] * dir[i]);
        let mut alpha = step.clamp(cfg.min_step, cfg.max_step);
        let (accepted, delta) = loop {
            for (i, &node) in interior.iter().enumerate() {
                let src = u.at(node);
                let dst = &mut trial.raw_mut()[node * k..(node + 1) * k];
                for c in 0..k {
                    dst[c] = src[c] - alpha * dir[i * k + c];
                }
            }
            evaluate(&trial, Some((eps, p)), &mut ev_t);
            let e_new = ev_t.parts.total;
            if e_new.is_finite() {
                let delta = h_n * parallel::sum(m, |i| ev_t.share[i] - ev.share[i]);
                if delta <= -ARMIJO * alpha * slope {
                    break (true, delta);
                }
            }
            alpha *= 0.5;
            backtracks += 1;
            if alpha < cfg.min_step {
                if !e_new.is_finite() {
                    return Err(Error::Diverged { iteration: iterations + 1 });
                }
                break (false, 0.0);
            }
        };
        if !accepted {
            stalled = true;
            break;
        }
        iterations += 1;
        // s = −α d, y = r_new − r_old
        let sy = -alpha * parallel::sum(m * k, |i| dir[i] * (ev_t.residual[i] - ev.residual[i]));
        if sy > 0.0 {
            let sms = alpha * alpha * parallel::sum(m * k, |i| dir[i] * dir[i] * metric[i]);
            let ymy = parallel::sum(m * k, |i| {
                let y = ev_t.residual[i] - ev.residual[i];
                y * y / metric[i]
            });
            let long = sms / sy;
            let short = sy / ymy;
            step = if short < 0.5 * long { short } else { long };
        } else {
            step = reset_step;
        }
        std::mem::swap(&mut u, &mut trial);
        std::mem::swap(&mut ev, &mut ev_t);
        tracked += delta;
        let mut r = row(iterations, &ev);
        r.energy = tracked;
        converged = r.grad_norm <= cfg.grad_tol;
        trace.push(r);
    }
    let last = *trace.last().unwrap();
    let record = ConvergenceRecord {
        iterations,
        converged,
        stalled,
        hit_max_iters: !converged && !stalled,
        initial_energy,
        energy: ev.parts,
        grad_sup: last.grad_norm,
        pde_residual: last.pde_residual,
        backtracks,
        trace,
    };
    Ok((u, record))
}

/// `iter,energy,dirichlet_part,potential_part,grad_norm,pde_residual`
pub fn write_trace_csv(path: &Path, trace: &[TraceRow]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "iter,energy,dirichlet_part,potential_part,grad_norm,pde_residual")?;
    for r in trace {
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e},{:e}",
            r.iter, r.energy, r.dirichlet_part, r.potential_part, r.grad_norm, r.pde_residual
        )?;
    }
    w.flush()?;
    Ok(())
}
