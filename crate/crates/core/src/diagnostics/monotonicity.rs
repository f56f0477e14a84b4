use serde::{Deserialize, Serialize};

use crate::discretization::{ball_profile, nodal_energy_density, Field, Point};
use crate::potentials::Potential;
use crate::{parallel, Error, Result};

/// Grid points per doubling of `ρ`; `ρ_{j+8} = 2ρ_j`.
pub const RHO_RATIO_STEPS: usize = 8;

/// Geometric radii `ρ_min · 2^{j/8}` up to `ρ_max`.
pub fn rho_grid(rho_min: f64, rho_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut j = 0;
    loop {
        let r = rho_min * 2f64.powf(j as f64 / RHO_RATIO_STEPS as f64);
        if r > rho_max * (1.0 + 1e-12) {
            return out;
        }
        out.push(r);
        j += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub center_id: usize,
    pub center: Vec<f64>,
    pub boundary_touching: bool,
    pub rho: Vec<f64>,
    pub phi: Vec<f64>,
}

impl Profile {
    pub fn psi(&self, k: f64) -> Vec<f64> {
        self.rho.iter().zip(&self.phi).map(|(r, f)| 2.0 * k * r + f).collect()
    }
}

/// `φ(ρ) = ρ^{2−n} ∫_{Ω ∩ B_ρ(x0)} e_ε(u)`.
pub fn renormalized_profile(u: &Field, eps: f64, p: &dyn Potential, x0: &Point, rhos: &[f64]) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let e = nodal_energy_density(u, Some((eps, p)));
    phi_from_density(u, &e, x0, rhos)
}

fn phi_from_density(u: &Field, e: &[f64], x0: &Point, rhos: &[f64]) -> Result<Vec<f64>> {
    let n = u.n() as i32;
    let ints = ball_profile(u.domain(), e, x0, rhos)?;
    Ok(rhos.iter().zip(ints).map(|(r, v)| r.powi(2 - n) * v).collect())
}

/// Profiles for many centers from one density evaluation. Centers within one
/// cell of `∂Ω` (or outside) are marked boundary-touching.
pub fn profiles_for_centers(u: &Field, density: &[f64], centers: &[Point], rhos: &[f64]) -> Result<Vec<Profile>> {
    let dom = u.domain();
    let n = dom.n();
    let results = parallel::map(centers.len(), |i| phi_from_density(u, density, &centers[i], rhos));
    results
        .into_iter()
        .enumerate()
        .map(|(i, phi)| {
            let c = centers[i];
            Ok(Profile {
                center_id: i,
                center: c[..n].to_vec(),
                boundary_touching: dom.signed_distance(&c) >= -dom.h(),
                rho: rhos.to_vec(),
                phi: phi?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginRow {
    pub center_id: usize,
    pub rho: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub k: f64,
    pub tolerance: f64,
    pub margins: Vec<MarginRow>,
    pub violations: Vec<MarginRow>,
    pub min_margin: f64,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Margins `m(ρ) = ψ′(ρ) − K(1 − ψ(2ρ))` at every grid radius with both
/// neighbours and `2ρ` on the grid, `ψ′` by centered differences.
///
/// Radii below `rho_floor` are skipped; margins below `−tolerance` are violations.
pub fn monotonicity_check(profiles: &[Profile], k: f64, tolerance: f64, rho_floor: f64) -> MonotonicityReport {
    let mut margins = Vec::new();
    for prof in profiles {
        let psi = prof.psi(k);
        let len = psi.len();
        if len < RHO_RATIO_STEPS + 2 {
            continue;
        }
        for j in 1..len - RHO_RATIO_STEPS {
            if prof.rho[j] < rho_floor * (1.0 - 1e-12) {
                continue;
            }
            let dpsi = (psi[j + 1] - psi[j - 1]) / (prof.rho[j + 1] - prof.rho[j - 1]);
            margins.push(MarginRow {
                center_id: prof.center_id,
                rho: prof.rho[j],
                margin: dpsi - k * (1.0 - psi[j + RHO_RATIO_STEPS]),
            });
        }
    }
    let violations: Vec<MarginRow> = margins.iter().copied().filter(|m| m.margin < -tolerance).collect();
    let min_margin = margins.iter().map(|m| m.margin).fold(f64::INFINITY, f64::min);
    MonotonicityReport {
        k,
        tolerance,
        margins,
        violations,
        min_margin,
    }
}

/// `{0} ∪ {k_min · ratio^j : 0 ≤ j < steps}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KGrid {
    pub k_min: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl Default for KGrid {
    fn default() -> Self {
        Self {
            k_min: 1e-3,
            ratio: std::f64::consts::SQRT_2,
            steps: 64,
        }
    }
}

impl KGrid {
    /// Grid value at position `i`; position 0 is `K = 0`.
    pub fn value(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.k_min * self.ratio.powi(i as i32 - 1)
        }
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cap(&self) -> f64 {
        self.value(self.steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KFit {
    /// Smallest passing grid value; the cap when nothing passes.
    pub k: f64,
    /// Position on the grid (0 is `K = 0`).
    pub index: usize,
    pub grid: KGrid,
    /// No grid value up to the cap passed.
    pub capped: bool,
    pub min_margin: f64,
    pub margins_tested: usize,
    pub boundary_centers: usize,
}

/// Smallest `K` on the grid for which every profile set passes
/// [`monotonicity_check`]. The margin is nondecreasing in `K` for `φ ≥ 0`, so
/// the grid is bisected.
pub fn fit_k(runs: &[&[Profile]], tolerance: f64, rho_floor: f64, grid: &KGrid) -> KFit {
    let check = |k: f64| {
        let mut min_margin = f64::INFINITY;
        let mut tested = 0;
        let mut ok = true;
        for profiles in runs {
            let rep = monotonicity_check(profiles, k, tolerance, rho_floor);
            ok &= rep.passed();
            tested += rep.margins.len();
            min_margin = min_margin.min(rep.min_margin);
        }
        (ok, min_margin, tested)
    };
    let boundary_centers = runs
        .iter()
        .flat_map(|r| r.iter())
        .filter(|p| p.boundary_touching)
        .count();
    let (ok_cap, cap_margin, cap_tested) = check(grid.cap());
    if !ok_cap {
        let (min_margin, tested) = (cap_margin, cap_tested);
        return KFit {
            k: grid.cap(),
            index: grid.steps,
            grid: *grid,
            capped: true,
            min_margin,
            margins_tested: tested,
            boundary_centers,
        };
    }
    // invariant: position `lo` fails, position `hi` passes
    let mut hi = grid.steps;
    if check(0.0).0 {
        hi = 0;
    } else {
        let mut lo = 0usize;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if check(grid.value(mid)).0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let (_, min_margin, tested) = check(grid.value(hi));
    KFit {
        k: grid.value(hi),
        index: hi,
        grid: *grid,
        capped: false,
        min_margin,
        margins_tested: tested,
        boundary_centers,
    }
}
