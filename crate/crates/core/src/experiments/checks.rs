use std::f64::consts::PI;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::discretization::{build_domain, BoundaryData, DomainKind, DomainSpec, Field};
use crate::potentials::{make_ginzburg_landau, normal_form, normal_form_residual, Potential, DEFAULT_QUAD_ORDER};
use crate::solver::{energy, energy_gradient, energy_parts, initial_guess};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientCheck {
    pub h: f64,
    pub eps: f64,
    pub perturbations: usize,
    pub step: f64,
    /// Largest `|FD − ⟨∇E, v⟩| / |⟨∇E, v⟩|`.
    pub max_relative_error: f64,
}

/// Compares `⟨∇E, v⟩` with the central difference `(E(u + tv) − E(u − tv)) / 2t`
/// along random directions `v` supported on interior nodes, at a perturbed
/// initial guess.
pub fn gradient_consistency(
    spec: &DomainSpec,
    boundary: &BoundaryData,
    p: &dyn Potential,
    eps: f64,
    perturbations: usize,
    seed: u64,
) -> Result<GradientCheck> {
    const STEP: f64 = 1e-5;
    let dom = Arc::new(build_domain(spec)?);
    let mut u = initial_guess(dom.clone(), boundary, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 0.1).expect("valid normal");
    for &node in dom.interior() {
        let v: Vec<f64> = u.value(node)?.iter().map(|x| x + noise.sample(&mut rng)).collect();
        u.set(node, &v)?;
    }
    let g = energy_gradient(&u, eps, p)?;
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let mut worst: f64 = 0.0;
    for _ in 0..perturbations {
        let mut plus = u.clone();
        let mut minus = u.clone();
        let mut directional = 0.0;
        for &node in dom.interior() {
            let v: Vec<f64> = (0..u.k()).map(|_| unit.sample(&mut rng)).collect();
            let base = u.value(node)?;
            directional += g.value(node)?.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
            let up: Vec<f64> = base.iter().zip(&v).map(|(x, d)| x + STEP * d).collect();
            let down: Vec<f64> = base.iter().zip(&v).map(|(x, d)| x - STEP * d).collect();
            plus.set(node, &up)?;
            minus.set(node, &down)?;
        }
        let fd = (energy(&plus, eps, p)? - energy(&minus, eps, p)?) / (2.0 * STEP);
        worst = worst.max((fd - directional).abs() / directional.abs());
    }
    Ok(GradientCheck {
        h: spec.h,
        eps,
        perturbations,
        step: STEP,
        max_relative_error: worst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormOracle {
    /// `A(1.1)` for Ginzburg–Landau with `k = 1`; the closed form is `(2 + 0.1)²`.
    pub gl1_value: f64,
    /// `max |z⊥·A z⊥ − f(z)|` over tube samples of the given potential.
    pub residual: f64,
    pub samples: usize,
}

pub fn normal_form_oracle(p: &dyn Potential, samples: usize, seed: u64) -> Result<NormalFormOracle> {
    let gl1 = make_ginzburg_landau(1)?;
    let a = normal_form(&gl1, &[1.1], DEFAULT_QUAD_ORDER)?;
    Ok(NormalFormOracle {
        gl1_value: a[(0, 0)],
        residual: normal_form_residual(p, samples, seed)?,
        samples,
    })
}

/// Discrete Dirichlet energy of `x/|x|` on the unit ball, divided by `4π`.
pub fn hedgehog_dirichlet(h: f64) -> Result<f64> {
    let spec = DomainSpec {
        kind: DomainKind::Ball {
            center: vec![0.0; 3],
            radius: 1.0,
        },
        lo: vec![-1.0; 3],
        hi: vec![1.0; 3],
        h,
    };
    let dom = Arc::new(build_domain(&spec)?);
    let u = Field::from_fn(dom, 3, |x| {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r == 0.0 {
            vec![0.0, 0.0, 1.0]
        } else {
            vec![x[0] / r, x[1] / r, x[2] / r]
        }
    })?;
    let p = make_ginzburg_landau(3)?;
    Ok(energy_parts(&u, 1.0, &p)?.dirichlet / (4.0 * PI))
}
