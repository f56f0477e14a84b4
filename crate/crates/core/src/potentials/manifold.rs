use std::fmt::Debug;

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::qtensor;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldTag {
    /// Unit sphere `S^{k-1}` in `ℝᵏ`.
    Sphere { k: usize },
    /// `{s (n⊗n − I/3) : n ∈ S²}` in the 5-dimensional space of Q-tensors.
    UniaxialQTensors { s: f64 },
    UserDefined,
}

/// A compact smooth submanifold `N ⊂ ℝᵏ` with a tubular neighbourhood `N_δ`.
pub trait VacuumManifold: Send + Sync + Debug {
    fn tag(&self) -> ManifoldTag;

    fn ambient_dim(&self) -> usize;

    /// Writes the nearest point of `N` to `z`; returns `false` where it is not unique.
    /// Does not check the tube radius.
    fn nearest_point_into(&self, z: &[f64], out: &mut [f64]) -> bool;

    /// Orthogonal projector onto `T_q N`, for `q ∈ N`.
    fn tangent_projector_at(&self, q: &[f64]) -> DMatrix<f64>;

    fn tubular_radius(&self) -> f64;

    fn sample_point(&self, rng: &mut dyn RngCore) -> DVector<f64>;

    /// A fixed point of `N`, used where a projection is undefined.
    fn reference_point(&self) -> DVector<f64>;

    /// Replaces `v` by its tangential part at `q ∈ N`.
    fn project_tangent_at(&self, q: &[f64], v: &mut [f64]) {
        let p = self.tangent_projector_at(q);
        let pv = &p * DVector::from_column_slice(v);
        v.copy_from_slice(pv.as_slice());
    }

    fn nearest_point(&self, z: &[f64]) -> Option<DVector<f64>> {
        let mut out = DVector::zeros(self.ambient_dim());
        self.nearest_point_into(z, out.as_mut_slice()).then_some(out)
    }

    /// `π(z)`; errors outside the tube `|z − π(z)| ≤ δ`.
    fn project_into(&self, z: &[f64], out: &mut [f64]) -> Result<()> {
        if !self.nearest_point_into(z, out) {
            return Err(Error::ProjectionUndefined);
        }
        let d = dist(z, out);
        let radius = self.tubular_radius();
        if d > radius {
            return Err(Error::OutsideTube { distance: d, radius });
        }
        Ok(())
    }

    fn project(&self, z: &[f64]) -> Result<DVector<f64>> {
        let mut out = DVector::zeros(self.ambient_dim());
        self.project_into(z, out.as_mut_slice())?;
        Ok(out)
    }

    /// `π_tan(z)`, the projector onto `T_{π(z)} N`.
    fn tangent_projector(&self, z: &[f64]) -> Result<DMatrix<f64>> {
        let q = self.project(z)?;
        Ok(self.tangent_projector_at(q.as_slice()))
    }

    /// `π_nor(z) = I − π_tan(z)`.
    fn normal_projector(&self, z: &[f64]) -> Result<DMatrix<f64>> {
        let k = self.ambient_dim();
        Ok(DMatrix::identity(k, k) - self.tangent_projector(z)?)
    }

    /// Orthonormal basis (columns) of `(T_q N)^⊥` for `q ∈ N`.
    fn normal_basis_at(&self, q: &[f64]) -> DMatrix<f64> {
        let k = self.ambient_dim();
        let nor = DMatrix::identity(k, k) - self.tangent_projector_at(q);
        let eig = SymmetricEigen::new(nor);
        let cols: Vec<DVector<f64>> = (0..k)
            .filter(|&i| eig.eigenvalues[i] > 0.5)
            .map(|i| eig.eigenvectors.column(i).into_owned())
            .collect();
        DMatrix::from_columns(&cols)
    }

    /// `dist(z, N)`: exact through the nearest point where it is unique, otherwise
    /// the minimum over a dense sample of `N`.
    fn distance(&self, z: &[f64]) -> f64 {
        if let Some(q) = self.nearest_point(z) {
            return dist(z, q.as_slice());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..4096)
            .map(|_| dist(z, self.sample_point(&mut rng).as_slice()))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn random_unit(k: usize, rng: &mut dyn RngCore) -> DVector<f64> {
    loop {
        let v = DVector::<f64>::from_fn(k, |_, _| StandardNormal.sample(&mut *rng));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Smallest distance along sampled normal rays at which the nearest point of `N`
/// stops being the ray's foot point.
///
/// Each ray starts at a sampled `q ∈ N` in a random unit normal direction and is
/// bisected on `[0, t_max]`; rays that never leave `q` within `t_max` are ignored.
pub fn estimate_focal_radius(m: &dyn VacuumManifold, rays: usize, t_max: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = m.ambient_dim();
    let mut best = f64::INFINITY;
    let mut out = vec![0.0; k];
    for _ in 0..rays {
        let q = m.sample_point(&mut rng);
        let basis = m.normal_basis_at(q.as_slice());
        if basis.ncols() == 0 {
            continue;
        }
        let coeffs = random_unit(basis.ncols(), &mut rng);
        let xi = &basis * coeffs;
        let scale = q.norm().max(1.0);
        let mut left_foot = |t: f64| {
            let z = &q + &xi * t;
            !m.nearest_point_into(z.as_slice(), &mut out) || dist(&out, q.as_slice()) > 1e-8 * scale
        };
        if !left_foot(t_max) {
            continue;
        }
        let (mut lo, mut hi) = (0.0, t_max);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if left_foot(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        best = best.min(hi);
    }
    best
}

/// The unit sphere `S^{k-1}`; `π(z) = z/|z|`, tube radius 1/2.
#[derive(Debug, Clone)]
pub struct Sphere {
    k: usize,
}

impl Sphere {
    pub fn new(k: usize) -> Self {
        Self { k }
    }
}

impl VacuumManifold for Sphere {
    fn tag(&self) -> ManifoldTag {
        ManifoldTag::Sphere { k: self.k }
    }

    fn ambient_dim(&self) -> usize {
        self.k
    }

    fn nearest_point_into(&self, z: &[f64], out: &mut [f64]) -> bool {
        let r = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r == 0.0 {
            return false;
        }
        for (o, x) in out.iter_mut().zip(z) {
            *o = x / r;
        }
        true
    }

    fn tangent_projector_at(&self, q: &[f64]) -> DMatrix<f64> {
        let q = DVector::from_column_slice(q);
        DMatrix::identity(self.k, self.k) - &q * q.transpose()
    }

    fn tubular_radius(&self) -> f64 {
        0.5
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> DVector<f64> {
        random_unit(self.k, rng)
    }

    fn reference_point(&self) -> DVector<f64> {
        let mut e = DVector::zeros(self.k);
        e[self.k - 1] = 1.0;
        e
    }

    fn project_tangent_at(&self, q: &[f64], v: &mut [f64]) {
        let dot: f64 = q.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        for (vi, qi) in v.iter_mut().zip(q) {
            *vi -= dot * qi;
        }
    }

    fn distance(&self, z: &[f64]) -> f64 {
        (z.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs()
    }
}

/// Uniaxial Q-tensors `s (n⊗n − I/3)` with fixed order parameter `s > 0`,
/// in the orthonormal 5-component basis of [`qtensor`].
#[derive(Debug, Clone)]
pub struct UniaxialQTensors {
    s: f64,
    delta: f64,
}

impl UniaxialQTensors {
    /// Tube radius is half the focal radius estimated by [`estimate_focal_radius`].
    pub fn new(s: f64) -> Self {
        let mut m = Self { s, delta: f64::INFINITY };
        let focal = estimate_focal_radius(&m, 256, 4.0 * s, 0xf0ca1);
        m.delta = 0.5 * focal;
        m
    }

    pub fn order_parameter(&self) -> f64 {
        self.s
    }

    pub fn point(&self, director: &[f64; 3]) -> [f64; 5] {
        uniaxial_point(self.s, director)
    }
}

/// `s (n⊗n − I/3)` in basis coordinates; `director` need not be normalized.
pub fn uniaxial_point(s: f64, director: &[f64; 3]) -> [f64; 5] {
    let n = nalgebra::Vector3::from_column_slice(director).normalize();
    qtensor::from_matrix(&((n * n.transpose() - Matrix3::identity() / 3.0) * s))
}

fn director_of(q: &[f64]) -> Option<nalgebra::Vector3<f64>> {
    let eig = SymmetricEigen::new(qtensor::to_matrix(q));
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let gap = eig.eigenvalues[idx[0]] - eig.eigenvalues[idx[1]];
    let scale = eig.eigenvalues.amax().max(1e-300);
    (gap > 1e-12 * scale).then(|| eig.eigenvectors.column(idx[0]).into_owned())
}

impl VacuumManifold for UniaxialQTensors {
    fn tag(&self) -> ManifoldTag {
        ManifoldTag::UniaxialQTensors { s: self.s }
    }

    fn ambient_dim(&self) -> usize {
        5
    }

    fn nearest_point_into(&self, z: &[f64], out: &mut [f64]) -> bool {
        // |Q − s(nnᵀ − I/3)|² = |Q|² − 2s nᵀQn + const for traceless Q, so the
        // minimizing director is the top eigenvector of Q.
        match director_of(z) {
            Some(n) => {
                out.copy_from_slice(&self.point(&[n[0], n[1], n[2]]));
                true
            }
            None => false,
        }
    }

    fn tangent_projector_at(&self, q: &[f64]) -> DMatrix<f64> {
        let n = director_of(q).unwrap_or_else(nalgebra::Vector3::z);
        let helper = if n[0].abs() < 0.9 {
            nalgebra::Vector3::x()
        } else {
            nalgebra::Vector3::y()
        };
        let m1 = n.cross(&helper).normalize();
        let m2 = n.cross(&m1);
        let mut p = DMatrix::zeros(5, 5);
        for m in [m1, m2] {
            let t = (n * m.transpose() + m * n.transpose()) / std::f64::consts::SQRT_2;
            let t = DVector::from_column_slice(&qtensor::from_matrix(&t));
            p += &t * t.transpose();
        }
        p
    }

    fn tubular_radius(&self) -> f64 {
        self.delta
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> DVector<f64> {
        let n = random_unit(3, rng);
        DVector::from_column_slice(&self.point(&[n[0], n[1], n[2]]))
    }

    fn reference_point(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.point(&[0.0, 0.0, 1.0]))
    }
}
