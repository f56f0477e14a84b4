use serde::{Deserialize, Serialize};

use crate::discretization::Field;
use crate::diagnostics::{Profile, RHO_RATIO_STEPS};
use crate::{Error, Result};

/// Fraction of centers whose small-scale energy defines `η`.
pub const WITNESS_QUANTILE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessStage {
    pub eps: f64,
    pub eta: f64,
    pub qualifying_centers: usize,
    /// `max r² sup_{B_{r/2}(x)} e / (η + r²)` over qualifying centers.
    pub c_fit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallEnergyWitness {
    pub r: f64,
    pub stages: Vec<WitnessStage>,
    /// `max c_fit / min c_fit` across stages; 1 when all fits vanish.
    pub spread: f64,
    pub stable: bool,
}

/// Fits `r² sup_{B_{r/2}(x)} e_ε ≤ C (η + r²)` over centers whose profile stays
/// below `η` for `ρ ≤ r`, one fit per stage. Each stage is `(ε, u, e, profiles)`.
pub fn small_energy_witness(stages: &[(f64, &Field, &[f64], &[Profile])], r: f64) -> Result<SmallEnergyWitness> {
    let mut out = Vec::with_capacity(stages.len());
    for &(eps, u, density, profiles) in stages {
        let dom = u.domain();
        if density.len() != dom.len() {
            return Err(Error::Diagnostics("density does not match the grid".into()));
        }
        let small: Vec<f64> = profiles
            .iter()
            .map(|p| {
                p.rho
                    .iter()
                    .zip(&p.phi)
                    .filter(|(rho, _)| **rho <= r * (1.0 + 1e-12))
                    .map(|(_, f)| *f)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let mut sorted: Vec<f64> = small.iter().copied().filter(|s| s.is_finite()).collect();
        if sorted.is_empty() {
            return Err(Error::Diagnostics(format!("no profile resolves radii up to r = {r}")));
        }
        sorted.sort_by(f64::total_cmp);
        let idx = ((WITNESS_QUANTILE * (sorted.len() - 1) as f64).round() as usize).min(sorted.len() - 1);
        let eta = sorted[idx];
        let mut qualifying = 0;
        let mut c_fit: f64 = 0.0;
        for (p, s) in profiles.iter().zip(&small) {
            if !(*s <= eta) {
                continue;
            }
            qualifying += 1;
            let mut x = [0.0; 3];
            x[..p.center.len()].copy_from_slice(&p.center);
            let sup = dom
                .active()
                .iter()
                .filter(|&&q| {
                    let y = dom.grid.position(q);
                    (0..3).map(|d| (y[d] - x[d]).powi(2)).sum::<f64>().sqrt() <= 0.5 * r
                })
                .map(|&q| density[q])
                .fold(0.0f64, f64::max);
            c_fit = c_fit.max(r * r * sup / (eta + r * r));
        }
        out.push(WitnessStage {
            eps,
            eta,
            qualifying_centers: qualifying,
            c_fit,
        });
    }
    let max = out.iter().map(|s| s.c_fit).fold(0.0f64, f64::max);
    let min = out.iter().map(|s| s.c_fit).fold(f64::INFINITY, f64::min);
    let spread = if max == 0.0 { 1.0 } else { max / min };
    Ok(SmallEnergyWitness {
        r,
        stages: out,
        spread,
        stable: spread < 2.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationReport {
    pub k: f64,
    pub tolerance: f64,
    /// `(center, ρ₀)` pairs meeting the hypothesis.
    pub tested: usize,
    pub violations: usize,
    /// Largest `φ(ρ) − (α + 2Kρ₀)` over tested pairs and `ρ < ρ₀`.
    pub worst_excess: f64,
}

impl PropagationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Threshold `α₀(ρ₀) = ½ − 4Kρ₀`, below which `ψ ≤ ½` on `[ρ₀, 2ρ₀]`.
pub fn propagation_threshold(k: f64, rho0: f64) -> f64 {
    0.5 - 4.0 * k * rho0
}

/// Whenever `α = max_{[ρ₀, 2ρ₀]} φ ≤ α₀(ρ₀)`, checks `φ(ρ) ≤ α + 2Kρ₀`
/// for every grid radius `ρ < ρ₀`.
pub fn propagation_check(profiles: &[Profile], k: f64, tolerance: f64) -> PropagationReport {
    let mut rep = PropagationReport {
        k,
        tolerance,
        tested: 0,
        violations: 0,
        worst_excess: f64::NEG_INFINITY,
    };
    for p in profiles {
        let len = p.phi.len();
        for j0 in 1..len.saturating_sub(RHO_RATIO_STEPS) {
            let alpha = p.phi[j0..=j0 + RHO_RATIO_STEPS].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !(alpha <= propagation_threshold(k, p.rho[j0])) {
                continue;
            }
            rep.tested += 1;
            let bound = alpha + 2.0 * k * p.rho[j0];
            let excess = p.phi[..j0].iter().map(|f| f - bound).fold(f64::NEG_INFINITY, f64::max);
            rep.worst_excess = rep.worst_excess.max(excess);
            if excess > tolerance {
                rep.violations += 1;
            }
        }
    }
    rep
}
