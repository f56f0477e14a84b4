//! Symmetric traceless 3×3 matrices in an orthonormal basis of ℝ⁵.
//!
//! ```text
//! E1 = diag(-1, -1, 2)/√6    E2 = diag(1, -1, 0)/√2
//! E3 = (e1⊗e2 + e2⊗e1)/√2    E4 = (e1⊗e3 + e3⊗e1)/√2    E5 = (e2⊗e3 + e3⊗e2)/√2
//! ```
//!
//! The basis is Frobenius-orthonormal, so `|z| = |Q|_F` and `z·w = tr(QW)`.

use nalgebra::Matrix3;

const A: f64 = 0.408_248_290_463_863_f64; // 1/√6
const B: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn to_matrix(z: &[f64]) -> Matrix3<f64> {
    let (q11, q22, q33) = (-A * z[0] + B * z[1], -A * z[0] - B * z[1], 2.0 * A * z[0]);
    let (q12, q13, q23) = (B * z[2], B * z[3], B * z[4]);
    Matrix3::new(q11, q12, q13, q12, q22, q23, q13, q23, q33)
}

/// Frobenius inner products `tr(M E_i)`; exact inverse of [`to_matrix`] on
/// symmetric traceless matrices.
pub fn from_matrix(m: &Matrix3<f64>) -> [f64; 5] {
    let s12 = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    let s13 = 0.5 * (m[(0, 2)] + m[(2, 0)]);
    let s23 = 0.5 * (m[(1, 2)] + m[(2, 1)]);
    [
        A * (-m[(0, 0)] - m[(1, 1)] + 2.0 * m[(2, 2)]),
        B * (m[(0, 0)] - m[(1, 1)]),
        2.0 * B * s12,
        2.0 * B * s13,
        2.0 * B * s23,
    ]
}

pub fn basis() -> [Matrix3<f64>; 5] {
    std::array::from_fn(|i| {
        let mut z = [0.0; 5];
        z[i] = 1.0;
        to_matrix(&z)
    })
}
