use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::manifold::random_unit;
use super::quadrature::gauss_legendre_unit;
use super::Potential;
use crate::Result;

pub const DEFAULT_QUAD_ORDER: usize = 16;

/// The matrix `A(z) = ∫₀¹ (1 − t) ∇²f(t z + (1 − t) π(z)) dt`, for which
/// `f(z) = z⊥·A(z) z⊥` with `z⊥ = z − π(z)`.
pub fn normal_form(p: &dyn Potential, z: &[f64], quad_order: usize) -> Result<DMatrix<f64>> {
    let m = p.manifold();
    let q = m.project(z)?;
    let z = DVector::from_column_slice(z);
    let (nodes, weights) = gauss_legendre_unit(quad_order.max(1));
    let k = p.dim();
    let mut a = DMatrix::zeros(k, k);
    for (t, w) in nodes.iter().zip(&weights) {
        let x = &z * *t + &q * (1.0 - t);
        a += p.hess(x.as_slice()) * (w * (1.0 - t));
    }
    Ok((&a + a.transpose()) * 0.5)
}

/// Estimates of the nondegeneracy constants, from random points of the tube.
#[derive(Debug, Clone, Copy)]
pub struct NondegeneracyEstimate {
    /// `min ξ·A(z)ξ / |ξ|²` over sampled tube points and normal `ξ`.
    pub alpha0: f64,
    /// Smallest eigenvalue of the Hessian restricted to the normal space, over
    /// sampled points of `N` (equals `2 α₀` at the manifold).
    pub min_normal_hessian: f64,
}

pub fn estimate_alpha0(p: &dyn Potential, samples: usize, seed: u64) -> Result<NondegeneracyEstimate> {
    let m = p.manifold();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = m.tubular_radius();
    let mut alpha0 = f64::INFINITY;
    let mut min_hess = f64::INFINITY;
    for _ in 0..samples {
        let q = m.sample_point(&mut rng);
        let basis = m.normal_basis_at(q.as_slice());
        if basis.ncols() == 0 {
            continue;
        }
        let h = basis.transpose() * p.hess(q.as_slice()) * &basis;
        min_hess = min_hess.min(SymmetricEigen::new(h).eigenvalues.min());

        let xi = &basis * random_unit(basis.ncols(), &mut rng);
        let t = rng.random_range(0.0..0.999 * delta);
        let z = &q + xi * t;
        let a = normal_form(p, z.as_slice(), DEFAULT_QUAD_ORDER)?;
        let an = basis.transpose() * a * &basis;
        alpha0 = alpha0.min(SymmetricEigen::new(an).eigenvalues.min());
    }
    Ok(NondegeneracyEstimate {
        alpha0,
        min_normal_hessian: min_hess,
    })
}

/// Largest `|z⊥·A(z) z⊥ − f(z)|` over `samples` random tube points at normal
/// distance below `0.999 δ`.
pub fn normal_form_residual(p: &dyn Potential, samples: usize, seed: u64) -> Result<f64> {
    let m = p.manifold();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = m.tubular_radius();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let q = m.sample_point(&mut rng);
        let basis = m.normal_basis_at(q.as_slice());
        if basis.ncols() == 0 {
            continue;
        }
        let xi = &basis * random_unit(basis.ncols(), &mut rng);
        let z = &q + xi * rng.random_range(0.0..0.999 * delta);
        let zp = &z - m.project(z.as_slice())?;
        let a = normal_form(p, z.as_slice(), DEFAULT_QUAD_ORDER)?;
        worst = worst.max((zp.dot(&(a * &zp)) - p.eval(z.as_slice())).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{make_ginzburg_landau, make_landau_de_gennes};

    #[test]
    fn one_dimensional_closed_form() {
        // ∫₀¹ (1−s)(−4 + 12(1+st)²) ds = (2+t)²
        let p = make_ginzburg_landau(1).unwrap();
        let a = normal_form(&p, &[1.1], 16).unwrap();
        assert!((a[(0, 0)] - 4.41).abs() < 1e-12);
    }

    #[test]
    fn on_the_manifold_it_is_half_the_hessian() {
        let p = make_ginzburg_landau(3).unwrap();
        let q = [0.0, 0.6, 0.8];
        let a = normal_form(&p, &q, 8).unwrap();
        assert!((a - p.hess(&q) * 0.5).amax() < 1e-14);
    }

    #[test]
    fn reproduces_potential_in_the_tube() {
        let p = make_ginzburg_landau(3).unwrap();
        let z = [1.05, 0.0, 0.0];
        let a = normal_form(&p, &z, 16).unwrap();
        let zp = DVector::from_vec(vec![0.05, 0.0, 0.0]);
        assert!((zp.dot(&(&a * &zp)) - p.eval(&z)).abs() < 1e-10);
    }

    #[test]
    fn out_of_tube_is_rejected() {
        let p = make_ginzburg_landau(2).unwrap();
        assert!(normal_form(&p, &[0.1, 0.1], 16).is_err());
    }

    #[test]
    fn alpha0_for_ginzburg_landau() {
        // along normal rays A = (2 + t)² with t ∈ (−1/2, 1/2)
        let p = make_ginzburg_landau(3).unwrap();
        let est = estimate_alpha0(&p, 200, 1).unwrap();
        assert!((est.min_normal_hessian - 8.0).abs() < 1e-12);
        assert!(est.alpha0 >= 2.25 - 1e-9 && est.alpha0 < 4.0 + 1e-9);
    }

    #[test]
    fn alpha0_positive_for_landau_de_gennes() {
        let p = make_landau_de_gennes(-1.0, 1.0, 1.0).unwrap();
        let est = estimate_alpha0(&p, 100, 2).unwrap();
        assert!(est.alpha0 > 0.0);
        assert!(est.min_normal_hessian > 0.0);
    }
}
