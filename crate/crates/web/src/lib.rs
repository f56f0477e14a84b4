//! Browser bindings for the demo page. Each binding returns a JSON string for
//! the page script.

use std::f64::consts::PI;
use std::sync::Arc;

use relaxlab::discretization::{build_domain, BoundaryData, DomainKind, DomainSpec};
use relaxlab::experiments::hedgehog_dirichlet;
use relaxlab::potentials::{make_ginzburg_landau, make_landau_de_gennes, normal_form, Potential, DEFAULT_QUAD_ORDER};
use relaxlab::solver::{initial_guess, minimize, SolverConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Relaxed {
    pub eps: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// `|u|` row by row; `None` outside the disk.
    pub modulus: Vec<Option<f64>>,
    pub energy: f64,
    pub dirichlet: f64,
    pub potential: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Smallest radius on the positive x-axis where `|u| ≥ ½`.
    pub core_radius: f64,
}

/// Relaxes the degree-one vortex `x/|x|` on the unit disk with `k = 2`.
pub fn relax_disk(eps: f64, cells: usize) -> Result<Relaxed, String> {
    if !(eps > 0.0) || !(4..=64).contains(&cells) {
        return Err("need eps > 0 and 4 ≤ cells ≤ 64".into());
    }
    let h = 1.0 / cells as f64;
    let spec = DomainSpec {
        kind: DomainKind::Ball {
            center: vec![0.0; 2],
            radius: 1.0,
        },
        lo: vec![-1.0; 2],
        hi: vec![1.0; 2],
        h,
    };
    let p = make_ginzburg_landau(2).map_err(|e| e.to_string())?;
    let dom = Arc::new(build_domain(&spec).map_err(|e| e.to_string())?);
    let u0 = initial_guess(dom.clone(), &BoundaryData::Hedgehog { center: None }, &p).map_err(|e| e.to_string())?;
    let cfg = SolverConfig {
        grad_tol: 1e-5,
        max_iters: 20_000,
        ..SolverConfig::default()
    };
    let (u, rec) = minimize(&u0, eps, &p, &cfg).map_err(|e| e.to_string())?;
    let g = &dom.grid;
    let (nx, ny) = (g.dims[1], g.dims[0]);
    let modulus: Vec<Option<f64>> = (0..g.len())
        .map(|node| {
            dom.is_active(node)
                .then(|| u.value(node).ok().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()))
                .flatten()
        })
        .collect();
    let mut core_radius = 1.0;
    for i in 0..=cells {
        let x = i as f64 * h;
        let node = g.nearest_node(&[0.0, x]).max(g.nearest_node(&[x, 0.0]));
        if let Some(Some(m)) = modulus.get(node) {
            if *m >= 0.5 {
                core_radius = x;
                break;
            }
        }
    }
    Ok(Relaxed {
        eps,
        h,
        nx,
        ny,
        modulus,
        energy: rec.energy.total,
        dirichlet: rec.energy.dirichlet,
        potential: rec.energy.potential,
        iterations: rec.iterations,
        converged: rec.converged,
        core_radius,
    })
}

#[derive(Debug, Serialize)]
pub struct Ray {
    pub potential: String,
    pub delta: f64,
    /// Signed normal distance from the vacuum.
    pub t: Vec<f64>,
    pub f: Vec<f64>,
    /// `z⊥·A(z) z⊥` by quadrature.
    pub quadratic: Vec<f64>,
    /// `ν·A(z) ν` for the unit normal `ν` of the ray.
    pub stiffness: Vec<f64>,
}

/// Walks `z = q + t ν` across the tube for `"gl"` (`k = 3`) or `"ldg"`.
pub fn normal_form_ray(potential: &str, samples: usize) -> Result<Ray, String> {
    let p: Box<dyn Potential> = match potential {
        "gl" => Box::new(make_ginzburg_landau(3).map_err(|e| e.to_string())?),
        "ldg" => Box::new(make_landau_de_gennes(-1.0, 1.0, 1.0).map_err(|e| e.to_string())?),
        other => return Err(format!("unknown potential {other:?}")),
    };
    let samples = samples.clamp(3, 401);
    let m = p.manifold();
    let q = m.reference_point();
    // the radial direction is normal for both vacua
    let nu = &q / q.norm();
    let delta = m.tubular_radius();
    let mut ray = Ray {
        potential: potential.into(),
        delta,
        t: Vec::new(),
        f: Vec::new(),
        quadratic: Vec::new(),
        stiffness: Vec::new(),
    };
    for i in 0..samples {
        let t = 0.98 * delta * (2.0 * i as f64 / (samples - 1) as f64 - 1.0);
        let z = &q + &nu * t;
        let a = normal_form(p.as_ref(), z.as_slice(), DEFAULT_QUAD_ORDER).map_err(|e| e.to_string())?;
        let zp = &nu * t;
        ray.t.push(t);
        ray.f.push(p.eval(z.as_slice()));
        ray.quadratic.push((&a * &zp).dot(&zp));
        ray.stiffness.push((&a * &nu).dot(&nu));
    }
    Ok(ray)
}

#[derive(Debug, Serialize)]
pub struct Hedgehog {
    pub h: f64,
    pub dirichlet: f64,
    pub ratio: f64,
}

/// Discrete `½∫|∇(x/|x|)|²` on the unit ball, against `4π`.
pub fn hedgehog(cells: usize) -> Result<Hedgehog, String> {
    if !(4..=20).contains(&cells) {
        return Err("need 4 ≤ cells ≤ 20".into());
    }
    let h = 1.0 / cells as f64;
    let ratio = hedgehog_dirichlet(h).map_err(|e| e.to_string())?;
    Ok(Hedgehog {
        h,
        dirichlet: ratio * 4.0 * PI,
        ratio,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = relaxDisk)]
pub fn relax_disk_js(eps: f64, cells: usize) -> Result<String, JsError> {
    to_js(relax_disk(eps, cells))
}

#[wasm_bindgen(js_name = normalFormRay)]
pub fn normal_form_ray_js(potential: &str, samples: usize) -> Result<String, JsError> {
    to_js(normal_form_ray(potential, samples))
}

#[wasm_bindgen(js_name = hedgehogEnergy)]
pub fn hedgehog_js(cells: usize) -> Result<String, JsError> {
    to_js(hedgehog(cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vortex_core_shrinks_with_eps() {
        let wide = relax_disk(0.4, 12).unwrap();
        let narrow = relax_disk(0.1, 12).unwrap();
        assert!(wide.converged && narrow.converged);
        assert!(narrow.core_radius < wide.core_radius);
        assert_eq!(wide.modulus.len(), wide.nx * wide.ny);
        assert!(wide.modulus.iter().flatten().all(|m| *m <= 1.0 + 1e-9));
    }

    #[test]
    fn ray_quadratic_reproduces_the_potential() {
        for name in ["gl", "ldg"] {
            let r = normal_form_ray(name, 21).unwrap();
            for (f, q) in r.f.iter().zip(&r.quadratic) {
                assert!((f - q).abs() < 1e-10, "{name}: {f} vs {q}");
            }
            // middle sample sits on the vacuum: A = ½∇²f there
            assert!(r.f[10].abs() < 1e-12);
        }
        // ginzburg-landau along the radius: ν·Aν = (2 + t)²
        let r = normal_form_ray("gl", 5).unwrap();
        for (t, s) in r.t.iter().zip(&r.stiffness) {
            assert!((s - (2.0 + t).powi(2)).abs() < 1e-10);
        }
        assert!(normal_form_ray("mexican_hat", 5).is_err());
    }

    #[test]
    fn hedgehog_is_near_four_pi() {
        let r = hedgehog(16).unwrap();
        assert!((r.ratio - 1.0).abs() < 0.1, "{}", r.ratio);
        assert!(hedgehog(2).is_err());
    }
}
