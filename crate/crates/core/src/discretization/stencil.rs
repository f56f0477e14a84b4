use nalgebra::{DMatrix, DVector};

use super::domain::{NodeClass, Point};
use super::field::Field;
use crate::{Error, Result};

/// `∇u` at an active node as a `k × n` matrix.
///
/// Interior nodes use central differences. At boundary nodes each axis uses the
/// central stencil when both neighbours are active, else the second-order
/// one-sided stencil into the domain, else the first-order one.
pub fn discrete_gradient(u: &Field, node: usize) -> Result<DMatrix<f64>> {
    u.value(node)?;
    let g = &u.domain().grid;
    let (n, k, h) = (g.n, u.k(), g.h);
    let dom = u.domain();
    let active = |q: Option<usize>| q.filter(|&q| dom.is_active(q));
    let mut out = DMatrix::zeros(k, n);
    let u0 = u.at(node);
    for d in 0..n {
        let plus = active(g.neighbor(node, d, 1));
        let minus = active(g.neighbor(node, d, -1));
        let col: Vec<f64> = match (minus, plus) {
            (Some(m), Some(p)) => (0..k).map(|c| (u.at(p)[c] - u.at(m)[c]) / (2.0 * h)).collect(),
            (None, None) => vec![0.0; k],
            (a, b) => {
                let (q1, s) = if let Some(p) = b { (p, 1.0) } else { (a.unwrap(), -1.0) };
                let dir = if s > 0.0 { 1 } else { -1 };
                match active(g.neighbor(q1, d, dir)) {
                    Some(q2) => (0..k)
                        .map(|c| s * (-3.0 * u0[c] + 4.0 * u.at(q1)[c] - u.at(q2)[c]) / (2.0 * h))
                        .collect(),
                    None => (0..k).map(|c| s * (u.at(q1)[c] - u0[c]) / h).collect(),
                }
            }
        };
        for c in 0..k {
            out[(c, d)] = col[c];
        }
    }
    Ok(out)
}

/// Five/seven-point Laplacian at an interior node.
pub fn discrete_laplacian(u: &Field, node: usize) -> Result<DVector<f64>> {
    let dom = u.domain();
    if node >= dom.len() || dom.class(node) != NodeClass::Interior {
        return Err(Error::NodeClass {
            node,
            class: if node < dom.len() { dom.class(node).name() } else { "off-grid" },
            required: "interior",
        });
    }
    let g = &dom.grid;
    let k = u.k();
    let h2 = g.h * g.h;
    let u0 = u.at(node);
    let mut out = DVector::zeros(k);
    for d in 0..g.n {
        let p = u.at(node + g.strides[d]);
        let m = u.at(node - g.strides[d]);
        for c in 0..k {
            out[c] += (p[c] + m[c] - 2.0 * u0[c]) / h2;
        }
    }
    Ok(out)
}

/// Multilinear interpolation of `u` at `y`; `None` unless every corner of the
/// enclosing cell is active.
pub fn interpolate(u: &Field, y: &Point) -> Option<Vec<f64>> {
    let g = &u.domain().grid;
    let n = g.n;
    let mut base = [0usize; 3];
    let mut frac = [0.0; 3];
    for d in 0..n {
        let t = (y[d] - g.lo[d]) / g.h;
        if t < -1e-12 || t > (g.dims[d] - 1) as f64 + 1e-12 {
            return None;
        }
        let i = (t.floor().max(0.0) as usize).min(g.dims[d] - 2);
        base[d] = i;
        frac[d] = (t - i as f64).clamp(0.0, 1.0);
    }
    let k = u.k();
    let mut out = vec![0.0; k];
    for corner in 0..(1usize << n) {
        let mut idx = base;
        let mut w = 1.0;
        for d in 0..n {
            if corner >> d & 1 == 1 {
                idx[d] += 1;
                w *= frac[d];
            } else {
                w *= 1.0 - frac[d];
            }
        }
        let q = g.node_at(&idx);
        if !u.domain().is_active(q) {
            if w == 0.0 {
                continue;
            }
            return None;
        }
        for c in 0..k {
            out[c] += w * u.at(q)[c];
        }
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalDerivative {
    /// `∂u/∂ν` along the outward normal.
    pub value: Vec<f64>,
    /// `false` when the second-order stencil was unavailable.
    pub second_order: bool,
}

/// `∂u/∂ν` at a boundary node from samples at `x − hν` and `x − 2hν`:
/// `(3u(x) − 4u(x − hν) + u(x − 2hν)) / 2h`.
///
/// Falls back to `(u(x) − u(x − hν))/h`, then to `∇u·ν` from the axis stencils,
/// flagging `second_order = false`.
pub fn boundary_normal_derivative(u: &Field, node: usize) -> Result<NormalDerivative> {
    let dom = u.domain();
    let nu = dom.normal_at(node).ok_or(Error::NodeClass {
        node,
        class: if node < dom.len() { dom.class(node).name() } else { "off-grid" },
        required: "boundary",
    })?;
    let h = dom.h();
    let x = dom.grid.position(node);
    let at = |t: f64| {
        let mut y = x;
        for d in 0..dom.n() {
            y[d] -= t * h * nu[d];
        }
        interpolate(u, &y)
    };
    let u0 = u.at(node);
    if let Some(u1) = at(1.0) {
        if let Some(u2) = at(2.0) {
            let value = (0..u.k())
                .map(|c| (3.0 * u0[c] - 4.0 * u1[c] + u2[c]) / (2.0 * h))
                .collect();
            return Ok(NormalDerivative {
                value,
                second_order: true,
            });
        }
        let value = (0..u.k()).map(|c| (u0[c] - u1[c]) / h).collect();
        return Ok(NormalDerivative {
            value,
            second_order: false,
        });
    }
    let g = discrete_gradient(u, node)?;
    let nu = DVector::from_column_slice(&nu[..dom.n()]);
    Ok(NormalDerivative {
        value: (g * nu).as_slice().to_vec(),
        second_order: false,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::discretization::{build_domain, DomainKind, DomainSpec};

    fn square(h: f64) -> Arc<crate::discretization::Domain> {
        Arc::new(
            build_domain(&DomainSpec {
                kind: DomainKind::Box {
                    lo: vec![0.0, 0.0],
                    hi: vec![1.0, 1.0],
                },
                lo: vec![0.0, 0.0],
                hi: vec![1.0, 1.0],
                h,
            })
            .unwrap(),
        )
    }

    #[test]
    fn exterior_access_is_refused() {
        let dom = Arc::new(
            build_domain(&DomainSpec {
                kind: DomainKind::Ball {
                    center: vec![0.0, 0.0],
                    radius: 0.9,
                },
                lo: vec![-1.0, -1.0],
                hi: vec![1.0, 1.0],
                h: 0.1,
            })
            .unwrap(),
        );
        let u = Field::zeros(dom.clone(), 1);
        assert!(discrete_gradient(&u, 0).is_err());
        assert!(discrete_laplacian(&u, 0).is_err());
        assert!(discrete_laplacian(&u, dom.boundary()[0]).is_err());
    }

    #[test]
    fn sine_laplacian_is_second_order() {
        let err = |h: f64| {
            let dom = square(h);
            let u = Field::from_fn(dom.clone(), 1, |x| vec![x[0].sin()]).unwrap();
            dom.interior()
                .iter()
                .map(|&p| {
                    let x = dom.grid.position(p);
                    (discrete_laplacian(&u, p).unwrap()[0] + x[0].sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(0.05) / err(0.025);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn normal_slope_on_flat_face() {
        let dom = square(0.1);
        let u = Field::from_fn(dom.clone(), 1, |x| vec![3.0 * x[0] + 1.0]).unwrap();
        let p = dom.grid.node_at(&[10, 5]);
        let d = boundary_normal_derivative(&u, p).unwrap();
        assert!(d.second_order);
        assert!((d.value[0] - 3.0).abs() < 1e-10);
    }
}
