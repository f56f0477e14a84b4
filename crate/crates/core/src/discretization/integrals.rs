use super::domain::{dist, Domain, NodeClass, Point};
use super::field::Field;
use crate::potentials::Potential;
use crate::{parallel, Error, Result};

/// Nodal energy density, zero at exterior nodes.
///
/// The Dirichlet part is `¼ Σ |u(q) − u(x)|²/h²` over grid edges `(x, q)` with at
/// least one interior endpoint, so `Σ hⁿ e(x)` gives each such edge weight ½
/// and equals the discrete energy exactly. The potential part `ε⁻² f(u)` is
/// carried by interior nodes only. With `potential = None` only the Dirichlet
/// part is computed.
pub fn nodal_energy_density(u: &Field, potential: Option<(f64, &dyn Potential)>) -> Vec<f64> {
    let dom = u.domain();
    let g = &dom.grid;
    let k = u.k();
    let inv_h2 = 1.0 / (g.h * g.h);
    let mut out = vec![0.0; dom.len()];
    parallel::for_each_block(&mut out, parallel::CHUNK, |b, block| {
        for (i, e) in block.iter_mut().enumerate() {
            let p = b * parallel::CHUNK + i;
            let class = dom.class(p);
            if class == NodeClass::Exterior {
                continue;
            }
            let u0 = u.at(p);
            let mut acc = 0.0;
            for d in 0..g.n {
                for s in [-1, 1] {
                    let Some(q) = g.neighbor(p, d, s) else { continue };
                    let counted = match class {
                        NodeClass::Interior => true,
                        _ => dom.class(q) == NodeClass::Interior,
                    };
                    if counted {
                        let uq = u.at(q);
                        acc += (0..k).map(|c| (uq[c] - u0[c]).powi(2)).sum::<f64>();
                    }
                }
            }
            *e = 0.25 * acc * inv_h2;
            if let (Some((eps, pot)), NodeClass::Interior) = (potential, class) {
                *e += pot.eval(u0) / (eps * eps);
            }
        }
    });
    out
}

/// `∫_{Ω_h ∩ B_ρ(x0)} e` for each `ρ` in a strictly increasing list, where
/// `Ω_h` is the union of dual cells of active nodes.
///
/// Each dual cell contributes `hⁿ e(x)` times the fraction of it inside the
/// ball, by `3ⁿ` midpoint subsampling for cells cut by the sphere.
pub fn ball_profile(domain: &Domain, density: &[f64], x0: &Point, rhos: &[f64]) -> Result<Vec<f64>> {
    let h = domain.h();
    if rhos.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(&r) = rhos.iter().find(|&&r| !(r > 2.0 * h)) {
        return Err(Error::UnresolvedRadius { rho: r, h });
    }
    if rhos.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("radii must be strictly increasing".into()));
    }
    let g = &domain.grid;
    let n = g.n;
    let rc = g.cell_radius();
    let rmax = *rhos.last().unwrap() + rc;
    let vol = g.cell_volume();
    let m = rhos.len();
    let mut full = vec![0.0; m];
    let mut cut = vec![0.0; m];

    let mut lo = [0usize; 3];
    let mut hi = [0usize; 3];
    for d in 0..n {
        let a = ((x0[d] - rmax - g.lo[d]) / h).floor().max(0.0);
        let b = ((x0[d] + rmax - g.lo[d]) / h).ceil().min((g.dims[d] - 1) as f64);
        if b < a {
            return Ok(vec![0.0; m]);
        }
        lo[d] = a as usize;
        hi[d] = b as usize;
    }
    let offsets = subsample_offsets(n, h);
    let mut sub_d = vec![0.0; offsets.len()];
    let mut idx = lo;
    loop {
        let p = g.node_at(&idx);
        let e = density[p];
        if e != 0.0 && domain.is_active(p) {
            let x = g.position(p);
            let d = dist(&x, x0);
            if d - rc < rmax {
                let j_full = rhos.partition_point(|&r| r < d + rc);
                if j_full < m {
                    full[j_full] += vol * e;
                }
                let j_cut = rhos.partition_point(|&r| r <= d - rc);
                if j_cut < j_full {
                    for (s, off) in offsets.iter().enumerate() {
                        let mut y = x;
                        for dd in 0..n {
                            y[dd] += off[dd];
                        }
                        sub_d[s] = dist(&y, x0);
                    }
                    for j in j_cut..j_full {
                        let inside = sub_d.iter().filter(|&&s| s <= rhos[j]).count();
                        cut[j] += vol * e * inside as f64 / offsets.len() as f64;
                    }
                }
            }
        }
        // advance the multi-index, last axis fastest
        let mut d = n;
        loop {
            if d == 0 {
                let mut acc = 0.0;
                return Ok((0..m)
                    .map(|j| {
                        acc += full[j];
                        acc + cut[j]
                    })
                    .collect());
            }
            d -= 1;
            if idx[d] < hi[d] {
                idx[d] += 1;
                break;
            }
            idx[d] = lo[d];
        }
    }
}

fn subsample_offsets(n: usize, h: f64) -> Vec<Point> {
    let total = 3usize.pow(n as u32);
    (0..total)
        .map(|s| {
            let mut y = [0.0; 3];
            let mut rest = s;
            for v in y.iter_mut().take(n) {
                *v = (rest % 3) as f64 * h / 3.0 - h / 3.0;
                rest /= 3;
            }
            y
        })
        .collect()
}

/// `∫_{Ω_h ∩ B_ρ(x0)} e` for a single radius.
pub fn ball_integral(domain: &Domain, density: &[f64], x0: &Point, rho: f64) -> Result<f64> {
    Ok(ball_profile(domain, density, x0, &[rho])?[0])
}

/// `∫_{Ω ∩ B_ρ(x0)} e_ε(u)` with `e_ε = ½|∇u|² + ε⁻² f(u)`.
pub fn ball_energy(u: &Field, eps: f64, x0: &Point, rho: f64, p: &dyn Potential) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let e = nodal_energy_density(u, Some((eps, p)));
    ball_integral(u.domain(), &e, x0, rho)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::discretization::{build_domain, DomainKind, DomainSpec};

    #[test]
    fn profile_matches_single_radius_calls() {
        let dom = Arc::new(
            build_domain(&DomainSpec {
                kind: DomainKind::Box {
                    lo: vec![-1.0; 3],
                    hi: vec![1.0; 3],
                },
                lo: vec![-1.0; 3],
                hi: vec![1.0; 3],
                h: 0.1,
            })
            .unwrap(),
        );
        let u = Field::from_fn(dom.clone(), 1, |x| vec![x[0] * x[1] + x[2]]).unwrap();
        let e = nodal_energy_density(&u, None);
        let x0 = [0.1, -0.3, 0.05];
        let rhos = [0.25, 0.3, 0.5, 0.9, 1.7];
        let prof = ball_profile(&dom, &e, &x0, &rhos).unwrap();
        for (r, v) in rhos.iter().zip(&prof) {
            let single = ball_integral(&dom, &e, &x0, *r).unwrap();
            assert!((single - v).abs() <= 1e-12 * v.abs().max(1.0));
        }
        assert!(prof.windows(2).all(|w| w[1] >= w[0]));
        let total: f64 = e.iter().sum::<f64>() * 1e-3;
        assert!((ball_integral(&dom, &e, &x0, 10.0).unwrap() - total).abs() < 1e-10 * total);
    }

    #[test]
    fn unresolved_radius() {
        let dom = build_domain(&DomainSpec {
            kind: DomainKind::Ball {
                center: vec![0.0, 0.0],
                radius: 1.0,
            },
            lo: vec![-1.0, -1.0],
            hi: vec![1.0, 1.0],
            h: 0.1,
        })
        .unwrap();
        let e = vec![1.0; dom.len()];
        assert!(matches!(
            ball_integral(&dom, &e, &[0.0; 3], 0.2),
            Err(Error::UnresolvedRadius { .. })
        ));
    }
}
