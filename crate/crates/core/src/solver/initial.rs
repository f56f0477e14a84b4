use crate::discretization::{BoundaryData, Domain, Field};
use crate::potentials::{Potential, VacuumManifold};
use crate::{parallel, Result};

const CG_TOL: f64 = 1e-10;

/// Replaces interior values by the discrete harmonic extension of the boundary
/// values, component by component, using conjugate gradients on `−Δ_h`.
pub fn harmonic_extension(u: &mut Field) {
    let dom = u.domain_arc().clone();
    let interior = dom.interior();
    let m = interior.len();
    let k = u.k();
    let g = &dom.grid;
    let inv_h2 = 1.0 / (g.h * g.h);
    let neighbours: Vec<[Option<usize>; 6]> = interior
        .iter()
        .map(|&node| {
            let mut nb = [None; 6];
            for d in 0..g.n {
                nb[2 * d] = dom.interior_ordinal(node - g.strides[d]);
                nb[2 * d + 1] = dom.interior_ordinal(node + g.strides[d]);
            }
            nb
        })
        .collect();
    let deg = 2.0 * g.n as f64;
    let apply = |x: &[f64], out: &mut [f64]| {
        parallel::for_each_block(out, parallel::CHUNK, |b, block| {
            for (j, o) in block.iter_mut().enumerate() {
                let i = b * parallel::CHUNK + j;
                let mut acc = deg * x[i];
                for q in neighbours[i].iter().flatten() {
                    acc -= x[*q];
                }
                *o = acc * inv_h2;
            }
        });
    };
    let max_iter = 20 * g.dims.iter().max().copied().unwrap_or(1) + 200;
    for c in 0..k {
        let mut rhs = vec![0.0; m];
        let mut x = vec![0.0; m];
        for (i, &node) in interior.iter().enumerate() {
            x[i] = u.at(node)[c];
            for d in 0..g.n {
                for q in [node - g.strides[d], node + g.strides[d]] {
                    if dom.interior_ordinal(q).is_none() {
                        rhs[i] += u.at(q)[c] * inv_h2;
                    }
                }
            }
        }
        let mut ax = vec![0.0; m];
        apply(&x, &mut ax);
        let mut r: Vec<f64> = (0..m).map(|i| rhs[i] - ax[i]).collect();
        let mut d = r.clone();
        let mut rr = parallel::sum(m, |i| r[i] * r[i]);
        let stop = CG_TOL * CG_TOL * parallel::sum(m, |i| rhs[i] * rhs[i]).max(1e-300);
        let mut ad = vec![0.0; m];
        for _ in 0..max_iter {
            if rr <= stop {
                break;
            }
            apply(&d, &mut ad);
            let alpha = rr / parallel::sum(m, |i| d[i] * ad[i]);
            for i in 0..m {
                x[i] += alpha * d[i];
                r[i] -= alpha * ad[i];
            }
            let rr_new = parallel::sum(m, |i| r[i] * r[i]);
            let beta = rr_new / rr;
            for i in 0..m {
                d[i] = r[i] + beta * d[i];
            }
            rr = rr_new;
        }
        for (i, &node) in interior.iter().enumerate() {
            u.at_mut(node)[c] = x[i];
        }
    }
}

/// Projects interior values onto `N` wherever the nearest point is unique.
/// Undefined nodes are set to the manifold's reference point when `fallback`
/// is set and left alone otherwise. Returns the number of undefined nodes.
pub fn project_to_manifold(u: &mut Field, m: &dyn VacuumManifold, fallback: bool) -> usize {
    let k = u.k();
    let interior = u.domain().interior().to_vec();
    let reference = m.reference_point();
    let mut out = vec![0.0; k];
    let mut undefined = 0;
    for node in interior {
        if m.nearest_point_into(u.at(node), &mut out) {
            u.at_mut(node).copy_from_slice(&out);
        } else {
            undefined += 1;
            if fallback {
                u.at_mut(node).copy_from_slice(reference.as_slice());
            }
        }
    }
    undefined
}

/// Boundary data, harmonic extension, then projection onto `N` where defined.
pub fn initial_guess(domain: std::sync::Arc<Domain>, boundary: &BoundaryData, p: &dyn Potential) -> Result<Field> {
    let mut u = Field::zeros(domain, p.dim());
    boundary.apply(&mut u, p)?;
    harmonic_extension(&mut u);
    project_to_manifold(&mut u, p.manifold(), false);
    Ok(u)
}
