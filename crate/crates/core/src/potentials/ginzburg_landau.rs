use nalgebra::DMatrix;

use super::{Potential, Sphere, VacuumManifold};
use crate::{Error, Result};

/// `f(z) = (1 − |z|²)²` on `ℝᵏ`, vanishing on the unit sphere.
#[derive(Debug, Clone)]
pub struct GinzburgLandau {
    sphere: Sphere,
    k: usize,
}

pub fn make_ginzburg_landau(k: usize) -> Result<GinzburgLandau> {
    if k == 0 {
        return Err(Error::InvalidParameter("target dimension k must be ≥ 1".into()));
    }
    Ok(GinzburgLandau {
        sphere: Sphere::new(k),
        k,
    })
}

fn norm2(z: &[f64]) -> f64 {
    z.iter().map(|x| x * x).sum()
}

impl Potential for GinzburgLandau {
    fn name(&self) -> &str {
        "ginzburg_landau"
    }

    fn dim(&self) -> usize {
        self.k
    }

    fn eval(&self, z: &[f64]) -> f64 {
        let w = 1.0 - norm2(z);
        w * w
    }

    fn grad_into(&self, z: &[f64], out: &mut [f64]) {
        let c = -4.0 * (1.0 - norm2(z));
        for (o, x) in out.iter_mut().zip(z) {
            *o = c * x;
        }
    }

    fn eval_grad_into(&self, z: &[f64], out: &mut [f64]) -> f64 {
        let w = 1.0 - norm2(z);
        for (o, x) in out.iter_mut().zip(z) {
            *o = -4.0 * w * x;
        }
        w * w
    }

    fn hess(&self, z: &[f64]) -> DMatrix<f64> {
        let w = 1.0 - norm2(z);
        DMatrix::from_fn(self.k, self.k, |i, j| {
            8.0 * z[i] * z[j] - if i == j { 4.0 * w } else { 0.0 }
        })
    }

    fn hess_diag_into(&self, z: &[f64], out: &mut [f64]) {
        let w = 1.0 - norm2(z);
        for (o, x) in out.iter_mut().zip(z) {
            *o = 8.0 * x * x - 4.0 * w;
        }
    }

    fn radial_growth_radius(&self) -> f64 {
        1.0
    }

    fn manifold(&self) -> &dyn VacuumManifold {
        &self.sphere
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_center_and_vacuum() {
        let p = make_ginzburg_landau(3).unwrap();
        assert_eq!(p.eval(&[0.0; 3]), 1.0);
        assert_eq!(p.grad(&[0.0; 3]).amax(), 0.0);
        let u = [0.6, 0.0, 0.8];
        assert!(p.eval(&u) < 1e-30);
        assert!(p.grad(&u).amax() < 1e-15);
    }

    #[test]
    fn outside_radius_two() {
        let p = make_ginzburg_landau(3).unwrap();
        let z = [2.0, 0.0, 0.0];
        assert_eq!(p.eval(&z), 9.0);
        assert_eq!(p.grad(&z).dot(&nalgebra::DVector::from_column_slice(&z)), 48.0);
    }

    #[test]
    fn rejects_zero_dimension() {
        assert!(make_ginzburg_landau(0).is_err());
    }

    #[test]
    fn normal_hessian_eigenvalue_is_eight() {
        let p = make_ginzburg_landau(3).unwrap();
        let q = [0.0, 0.6, 0.8];
        let h = p.hess(&q);
        let v = nalgebra::DVector::from_column_slice(&q);
        assert!((v.dot(&(&h * &v)) - 8.0).abs() < 1e-14);
    }
}
