use nalgebra::{DMatrix, Matrix3};

use super::{qtensor, Potential, UniaxialQTensors, VacuumManifold};
use crate::{Error, Result};

/// Bulk Landau–de Gennes potential on Q-tensors (ℝ⁵),
///
/// ```text
/// f(Q) = a/2 tr(Q²) − b2/3 tr(Q³) + c2/4 (tr Q²)² − min f
/// ```
///
/// with `a ≤ 0`, `b2, c2 > 0`. The minimum is attained on the uniaxial set
/// `s*(n⊗n − I/3)`; `s*` is found by minimizing the uniaxial reduction
/// `g(s) = a s²/3 − 2 b2 s³/27 + c2 s⁴/9`.
#[derive(Debug, Clone)]
pub struct LandauDeGennes {
    a: f64,
    b2: f64,
    c2: f64,
    shift: f64,
    s_star: f64,
    radius: f64,
    manifold: UniaxialQTensors,
    basis: [Matrix3<f64>; 5],
}

pub fn make_landau_de_gennes(a: f64, b2: f64, c2: f64) -> Result<LandauDeGennes> {
    if !(a <= 0.0) {
        return Err(Error::InvalidParameter(format!("a = {a} must be ≤ 0")));
    }
    if !(b2 > 0.0) {
        return Err(Error::InvalidParameter(format!("b2 = {b2} must be > 0")));
    }
    if !(c2 > 0.0) {
        return Err(Error::InvalidParameter(format!("c2 = {c2} must be > 0")));
    }
    let reduced = |s: f64| a * s * s / 3.0 - 2.0 * b2 * s.powi(3) / 27.0 + c2 * s.powi(4) / 9.0;
    let slope = |s: f64| 2.0 * a * s / 3.0 - 2.0 * b2 * s * s / 9.0 + 4.0 * c2 * s.powi(3) / 9.0;
    let curvature = |s: f64| 2.0 * a / 3.0 - 4.0 * b2 * s / 9.0 + 4.0 * c2 * s * s / 3.0;
    let s_star = minimize_uniaxial(reduced, slope, curvature);
    // |tr Q³| ≤ |Q|³/√6, so ∇f·z ≥ |z|²(a − b2|z|/√6 + c2|z|²) ≥ 0 beyond this root.
    let bb = b2 / 6f64.sqrt();
    let radius = (bb + (bb * bb - 4.0 * a * c2).sqrt()) / (2.0 * c2);
    Ok(LandauDeGennes {
        a,
        b2,
        c2,
        shift: reduced(s_star),
        s_star,
        radius,
        manifold: UniaxialQTensors::new(s_star),
        basis: qtensor::basis(),
    })
}

/// Golden-section search of the unimodal reduction on `(0, ∞)` to width 1e-12,
/// followed by Newton polishing on the slope: comparisons of `g` alone cannot
/// resolve the minimizer much below `√ε_mach`.
fn minimize_uniaxial(g: impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64, d2g: impl Fn(f64) -> f64) -> f64 {
    let mut hi = 1.0;
    while dg(hi) <= 0.0 {
        hi *= 2.0;
    }
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, hi);
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > 1e-12 {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    let mut s = 0.5 * (a + b);
    for _ in 0..4 {
        let curv = d2g(s);
        if curv > 0.0 {
            s -= dg(s) / curv;
        }
    }
    s
}

impl LandauDeGennes {
    pub fn order_parameter(&self) -> f64 {
        self.s_star
    }

    pub fn coefficients(&self) -> (f64, f64, f64) {
        (self.a, self.b2, self.c2)
    }

    /// Unshifted bulk energy `f_B`.
    pub fn bulk(&self, z: &[f64]) -> f64 {
        let q = qtensor::to_matrix(z);
        let t2: f64 = z.iter().map(|x| x * x).sum();
        let t3 = (q * q * q).trace();
        0.5 * self.a * t2 - self.b2 / 3.0 * t3 + 0.25 * self.c2 * t2 * t2
    }

    pub fn vacuum_point(&self, director: &[f64; 3]) -> [f64; 5] {
        self.manifold.point(director)
    }
}

impl Potential for LandauDeGennes {
    fn name(&self) -> &str {
        "landau_de_gennes"
    }

    fn dim(&self) -> usize {
        5
    }

    fn eval(&self, z: &[f64]) -> f64 {
        // clamp tiny negative round-off at the vacuum
        (self.bulk(z) - self.shift).max(0.0)
    }

    fn grad_into(&self, z: &[f64], out: &mut [f64]) {
        // ∂/∂z_i tr(Q³) = 3 tr(Q² E_i)
        let q = qtensor::to_matrix(z);
        let q2 = qtensor::from_matrix(&(q * q));
        let t2: f64 = z.iter().map(|x| x * x).sum();
        for i in 0..5 {
            out[i] = self.a * z[i] - self.b2 * q2[i] + self.c2 * t2 * z[i];
        }
    }

    fn hess(&self, z: &[f64]) -> DMatrix<f64> {
        let q = qtensor::to_matrix(z);
        let t2: f64 = z.iter().map(|x| x * x).sum();
        let e = &self.basis;
        DMatrix::from_fn(5, 5, |i, j| {
            let cubic = (q * e[i] * e[j]).trace();
            let diag = if i == j { self.a + self.c2 * t2 } else { 0.0 };
            diag - 2.0 * self.b2 * cubic + 2.0 * self.c2 * z[i] * z[j]
        })
    }

    fn radial_growth_radius(&self) -> f64 {
        self.radius
    }

    fn manifold(&self) -> &dyn VacuumManifold {
        &self.manifold
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Rotation3, Vector3};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_coefficients() {
        assert!(make_landau_de_gennes(0.1, 1.0, 1.0).is_err());
        assert!(make_landau_de_gennes(-1.0, 0.0, 1.0).is_err());
        assert!(make_landau_de_gennes(-1.0, 1.0, -1.0).is_err());
        assert!(make_landau_de_gennes(0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn order_parameter_matches_root_of_reduced_slope() {
        // oracle: positive root of 4 c2 s² − 2 b2 s + 6 a = 0
        for (a, b2, c2) in [(-1.0, 1.0, 1.0), (-0.2, 3.0, 2.0), (0.0, 1.0, 0.5)] {
            let p = make_landau_de_gennes(a, b2, c2).unwrap();
            let root = (2.0 * b2 + (4.0 * b2 * b2 - 96.0 * a * c2).sqrt()) / (8.0 * c2);
            assert!((p.order_parameter() - root).abs() < 1e-12, "{} vs {root}", p.order_parameter());
        }
    }

    #[test]
    fn vanishes_on_uniaxial_vacuum_and_not_at_origin() {
        let p = make_landau_de_gennes(-1.0, 1.0, 1.0).unwrap();
        let q = p.vacuum_point(&[1.0, 0.0, 0.0]);
        assert!(p.eval(&q) < 1e-12);
        assert!(p.grad(&q).amax() < 1e-12);
        assert!(p.eval(&[0.0; 5]) > 0.0);
    }

    #[test]
    fn rotation_invariance() {
        let p = make_landau_de_gennes(-0.7, 1.3, 0.9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z: [f64; 5] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let q = qtensor::to_matrix(&z);
        for _ in 0..10 {
            let axis = Vector3::new(rng.random(), rng.random(), rng.random::<f64>() + 0.1);
            let r = Rotation3::new(axis.normalize() * rng.random_range(0.0..6.0)).into_inner();
            let zr = qtensor::from_matrix(&(r * q * r.transpose()));
            assert!((p.eval(&zr) - p.eval(&z)).abs() < 1e-10);
        }
    }

    #[test]
    fn radial_growth_holds_beyond_radius() {
        let p = make_landau_de_gennes(-1.0, 2.0, 1.0).unwrap();
        let r = p.radial_growth_radius();
        let s = p.order_parameter();
        // the uniaxial direction with positive s saturates |tr Q³| = |Q|³/√6
        let n = p.vacuum_point(&[0.0, 0.0, 1.0]);
        let scale = r / (s * (2.0f64 / 3.0).sqrt());
        let z: Vec<f64> = n.iter().map(|x| x * scale).collect();
        let g = p.grad(&z);
        let dot: f64 = g.iter().zip(&z).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-9, "boundary case should be tight: {dot}");
    }
}
