use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::manifold::random_unit;
use super::Potential;

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub hypothesis: &'static str,
    pub point: Vec<f64>,
    pub value: f64,
}

/// Monte-Carlo check of the structural hypotheses on a potential.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub samples: usize,
    /// Smallest `∇f(z)·z` seen for `|z| ≥ R`.
    pub min_radial_derivative: f64,
    /// Largest `f(q)` over sampled `q ∈ N`.
    pub max_vacuum_value: f64,
    /// Smallest eigenvalue of `∇²f` restricted to the normal space on `N`;
    /// an estimate of `2 α₀`.
    pub min_normal_hessian: f64,
    pub violations: Vec<Violation>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_hypotheses(p: &dyn Potential, sample_count: usize, seed: u64) -> HypothesisReport {
    let samples = sample_count.max(100);
    let m = p.manifold();
    let k = p.dim();
    let r = p.radial_growth_radius();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();

    let mut min_radial = f64::INFINITY;
    for _ in 0..samples {
        let z = random_unit(k, &mut rng) * (r * rng.random_range(1.0..4.0));
        let g = p.grad(z.as_slice());
        let radial = g.dot(&z);
        min_radial = min_radial.min(radial);
        let scale = 1e-12 * (1.0 + g.norm() * z.norm());
        if radial < -scale {
            violations.push(Violation {
                hypothesis: "radial_growth",
                point: z.as_slice().to_vec(),
                value: radial,
            });
        }
    }

    let mut max_vacuum = 0.0f64;
    let mut min_hess = f64::INFINITY;
    for _ in 0..samples {
        let q = m.sample_point(&mut rng);
        let fq = p.eval(q.as_slice());
        max_vacuum = max_vacuum.max(fq);
        if fq > 1e-10 {
            violations.push(Violation {
                hypothesis: "vacuum",
                point: q.as_slice().to_vec(),
                value: fq,
            });
        }
        let basis = m.normal_basis_at(q.as_slice());
        if basis.ncols() == 0 {
            continue;
        }
        let h = basis.transpose() * p.hess(q.as_slice()) * &basis;
        let lam = SymmetricEigen::new(h).eigenvalues.min();
        min_hess = min_hess.min(lam);
        if lam <= 1e-8 {
            violations.push(Violation {
                hypothesis: "nondegeneracy",
                point: q.as_slice().to_vec(),
                value: lam,
            });
        }
    }

    HypothesisReport {
        samples,
        min_radial_derivative: min_radial,
        max_vacuum_value: max_vacuum,
        min_normal_hessian: min_hess,
        violations,
    }
}

