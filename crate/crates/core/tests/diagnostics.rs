use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use relaxlab::diagnostics::{
    bochner_residual, boundary_gradient_report, diagnose, energy_density, fit_k, monotonicity_check,
    profiles_for_centers, propagation_check, renormalized_profile, rho_grid, singular_set_estimate,
    small_energy_witness, stress_tensor, uniform_convergence_profile, CompactSet, KGrid, Profile,
};
use relaxlab::discretization::{build_domain, Domain, DomainKind, DomainSpec, Field, Point};
use relaxlab::potentials::make_ginzburg_landau;
use relaxlab::solver::energy;
use relaxlab::Error;

fn ball(n: usize, h: f64) -> Arc<Domain> {
    Arc::new(
        build_domain(&DomainSpec {
            kind: DomainKind::Ball {
                center: vec![0.0; n],
                radius: 1.0,
            },
            lo: vec![-1.0; n],
            hi: vec![1.0; n],
            h,
        })
        .unwrap(),
    )
}

fn square(h: f64) -> Arc<Domain> {
    Arc::new(
        build_domain(&DomainSpec {
            kind: DomainKind::Box {
                lo: vec![-1.0, -1.0],
                hi: vec![1.0, 1.0],
            },
            lo: vec![-1.0, -1.0],
            hi: vec![1.0, 1.0],
            h,
        })
        .unwrap(),
    )
}

fn hedgehog(dom: Arc<Domain>) -> Field {
    Field::from_fn(dom, 3, |x| {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r == 0.0 {
            vec![0.0, 0.0, 1.0]
        } else {
            vec![x[0] / r, x[1] / r, x[2] / r]
        }
    })
    .unwrap()
}

fn constant(dom: Arc<Domain>) -> Field {
    Field::from_fn(dom, 3, |_| vec![0.6, 0.0, 0.8]).unwrap()
}

fn zero_profiles(count: usize) -> Vec<Profile> {
    let rho = rho_grid(0.05, 1.0);
    (0..count)
        .map(|i| Profile {
            center_id: i,
            center: vec![0.0; 3],
            boundary_touching: i % 2 == 1,
            phi: vec![0.0; rho.len()],
            rho: rho.clone(),
        })
        .collect()
}

#[test]
fn constant_field_is_quiet_everywhere() {
    let dom = ball(3, 1.0 / 10.0);
    let u = constant(dom);
    let p = make_ginzburg_landau(3).unwrap();
    let rhos = rho_grid(0.4, 0.8);
    let rep = diagnose(&u, 0.3, &p, &[[0.0; 3], [0.5, 0.0, 0.0]], &rhos, 0.5).unwrap();
    assert!(rep.density.iter().all(|&e| e.abs() < 1e-14));
    assert!(rep.stress.div_sup <= 1e-12);
    assert_eq!(rep.bochner.fitted_c, Some(0.0));
    assert!(rep.boundary.gradient_sup < 1e-12);
    assert!(rep.boundary.boundary_distance_sup < 1e-12);
    assert!(rep.profiles.iter().all(|p| p.phi.iter().all(|&f| f.abs() < 1e-14)));
    let sing = singular_set_estimate(&u, 1e-6, 0.3).unwrap();
    assert!(sing.nodes.is_empty());
}

#[test]
fn density_integrates_to_the_energy() {
    let dom = ball(3, 1.0 / 12.0);
    let u = Field::from_fn(dom, 3, |x| vec![0.5 + x[0], x[1] * x[2], 0.3]).unwrap();
    let p = make_ginzburg_landau(3).unwrap();
    let eps = 0.4;
    let e = energy_density(&u, eps, &p).unwrap();
    let total: f64 = e.iter().sum::<f64>() * u.h().powi(3);
    let exact = energy(&u, eps, &p).unwrap();
    assert!(((total - exact) / exact).abs() < 1e-10);
}

#[test]
fn hedgehog_profile_is_scale_invariant() {
    let dom = ball(3, 1.0 / 24.0);
    let u = hedgehog(dom);
    let p = make_ginzburg_landau(3).unwrap();
    let h = u.h();
    let rhos = rho_grid(0.25, 0.9);
    let phi = renormalized_profile(&u, 0.2, &p, &[0.0; 3], &rhos).unwrap();
    for (r, f) in rhos.iter().zip(&phi) {
        // the grid cuts off the core, losing O(h) energy in absolute terms
        let deficit = r * (4.0 * PI - f) / h;
        assert!(deficit > 0.0 && deficit < 8.0, "phi({r}) = {f}");
        if *r >= 0.5 {
            assert!((f / (4.0 * PI) - 1.0).abs() < 0.05, "phi({r}) = {f}");
        }
    }
}

#[test]
fn hedgehog_singular_set_is_one_component_at_the_origin() {
    let dom = ball(3, 1.0 / 16.0);
    let origin = dom.grid.nearest_node(&[0.0; 3]);
    let u = hedgehog(dom);
    let r = 0.25;
    let s = singular_set_estimate(&u, 2.0 * PI, r).unwrap();
    assert_eq!(s.components.len(), 1, "{:?}", s.components);
    assert!(s.nodes.contains(&origin));
    assert!(s.components[0].diameter <= 4.0 * r);
    assert!(s.components[0].centroid.iter().all(|c| c.abs() < 2.0 * u.h()));
}

#[test]
fn singular_set_limits() {
    let dom = ball(3, 1.0 / 10.0);
    let u = hedgehog(dom);
    assert!(singular_set_estimate(&u, f64::INFINITY, 0.3).unwrap().nodes.is_empty());
    assert!(matches!(singular_set_estimate(&u, 1.0, 0.2), Err(Error::UnresolvedRadius { .. })));
}

#[test]
fn tanh_layer_has_equipartition() {
    // u = tanh(√2 x / ε) solves ε² u'' = 2u(u² − 1), so ½u'² = ε⁻²(1 − u²)² and T₁₁ = 0.
    let eps = 0.25;
    let p = make_ginzburg_landau(1).unwrap();
    let mut worst = Vec::new();
    for h in [1.0 / 32.0, 1.0 / 64.0] {
        let dom = square(h);
        let u = Field::from_fn(dom.clone(), 1, |x| vec![(2f64.sqrt() * x[0] / eps).tanh()]).unwrap();
        let rep = stress_tensor(&u, eps, &p).unwrap();
        let t11 = rep.tensor.chunks(4).map(|t| t[0].abs()).fold(0.0, f64::max);
        let t22_min = rep.tensor.chunks(4).map(|t| t[3]).fold(f64::INFINITY, f64::min);
        assert!(rep.tensor.chunks(4).all(|t| t[1] == 0.0 && t[2] == 0.0));
        // T₂₂ = −2ε⁻²f reaches −2ε⁻² at the layer centre
        assert!((t22_min + 2.0 / (eps * eps)).abs() < 0.05 * 2.0 / (eps * eps));
        worst.push(t11);
    }
    let ratio = worst[0] / worst[1];
    assert!(ratio > 3.5 && ratio < 4.5, "T11 sup {worst:?}");
}

#[test]
fn hedgehog_tangential_boundary_gradient_matches_analytic() {
    let dom = ball(3, 1.0 / 24.0);
    let u = hedgehog(dom.clone());
    let p = make_ginzburg_landau(3).unwrap();
    let rep = boundary_gradient_report(&u, 0.2, &p).unwrap();
    let mut sum = 0.0;
    for (i, &node) in dom.boundary().iter().enumerate() {
        let x = dom.grid.position(node);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let exact = 2f64.sqrt() / r;
        sum += (rep.tangential[i] - exact).abs() / exact;
    }
    let mean = sum / dom.boundary().len() as f64;
    assert!(mean < 0.05, "mean relative error {mean}");
    assert!(rep.boundary_distance_sup < 1e-12);
    assert!(rep.normal_sup < 0.2, "radial field has no normal derivative: {}", rep.normal_sup);
}

#[test]
fn bochner_gate_excludes_far_nodes() {
    let dom = ball(3, 1.0 / 10.0);
    let u = Field::from_fn(dom, 3, |x| vec![0.2 * x[0], 0.1, 0.0]).unwrap();
    let p = make_ginzburg_landau(3).unwrap();
    let rep = bochner_residual(&u, 0.3, &p, 0.5).unwrap();
    assert!(rep.empty);
    assert_eq!(rep.fitted_c, None);
    let rep = bochner_residual(&u, 0.3, &p, 2.0).unwrap();
    assert!(rep.qualifying_nodes > 0);
    assert!(rep.fitted_c.unwrap().is_finite());
}

#[test]
fn zero_energy_monotonicity_and_k_fit() {
    let profiles = zero_profiles(4);
    for k in [0.0, 0.1, 3.0] {
        assert!(monotonicity_check(&profiles, k, 1e-3, 0.0).passed());
    }
    let fit = fit_k(&[&profiles], 1e-3, 0.0, &KGrid::default());
    assert_eq!(fit.k, 0.0);
    assert!(!fit.capped);
}

#[test]
fn decreasing_profile_needs_positive_k() {
    let rho = rho_grid(0.05, 1.0);
    let phi: Vec<f64> = rho.iter().map(|r| 1.0 - 0.5 * r).collect();
    let prof = Profile {
        center_id: 0,
        center: vec![1.0, 0.0, 0.0],
        boundary_touching: true,
        rho,
        phi,
    };
    let grid = KGrid::default();
    let fit = fit_k(&[std::slice::from_ref(&prof)], 1e-3, 0.0, &grid);
    assert!(fit.k > 0.0 && !fit.capped);
    assert!(monotonicity_check(std::slice::from_ref(&prof), fit.k, 1e-3, 0.0).passed());
    let below = grid.value(fit.index - 1);
    assert!(!monotonicity_check(std::slice::from_ref(&prof), below, 1e-3, 0.0).passed());
}

#[test]
fn uniform_convergence_of_identical_fields_is_zero() {
    let dom = ball(3, 1.0 / 10.0);
    let u = hedgehog(dom);
    let x = CompactSet::Annulus {
        center: vec![0.0; 3],
        r_min: 0.3,
        r_max: Some(0.95),
    };
    let prof = uniform_convergence_profile(&[(0.4, &u), (0.2, &u)], &u, &x).unwrap();
    assert_eq!(prof, vec![(0.4, 0.0), (0.2, 0.0)]);
    let empty = CompactSet::Ball {
        center: vec![5.0; 3],
        radius: 0.1,
    };
    assert!(uniform_convergence_profile(&[(0.4, &u)], &u, &empty).is_err());
}

#[test]
fn compact_set_parses_from_json() {
    let x: CompactSet = serde_json::from_str(r#"{"kind":"exclusion","points":[[0,0,0]],"margin":0.3}"#).unwrap();
    assert!(x.contains(&[0.5, 0.0, 0.0]));
    assert!(!x.contains(&[0.1, 0.0, 0.0]));
    assert!(serde_json::from_str::<CompactSet>(r#"{"kind":"all","extra":1}"#).is_err());
}

#[test]
fn witness_and_propagation_on_smooth_and_constant_data() {
    let dom = ball(3, 1.0 / 12.0);
    let p = make_ginzburg_landau(3).unwrap();
    let u = constant(dom.clone());
    let e = energy_density(&u, 0.3, &p).unwrap();
    let centers: Vec<Point> = vec![[0.0; 3], [0.4, 0.0, 0.0], [0.0, 0.4, 0.0]];
    let rhos = rho_grid(0.2, 0.8);
    let profiles = profiles_for_centers(&u, &e, &centers, &rhos).unwrap();
    let w = small_energy_witness(&[(0.3, &u, &e, &profiles), (0.2, &u, &e, &profiles)], 0.3).unwrap();
    assert!(w.stable);
    assert_eq!(w.spread, 1.0);
    let prop = propagation_check(&profiles, 0.0, 1e-3);
    assert!(prop.tested > 0 && prop.passed());

    let h = hedgehog(dom);
    let eh = energy_density(&h, 0.3, &p).unwrap();
    let ph = profiles_for_centers(&h, &eh, &[[0.0; 3]], &rhos).unwrap();
    let prop = propagation_check(&ph, 0.0, 1e-3);
    assert_eq!(prop.tested, 0, "4π exceeds the smallness threshold");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn monotonicity_verdict_ignores_center_order(
        slopes in prop::collection::vec(-1.0f64..1.0, 2..6),
        k in 0.0f64..2.0,
        shift in 0usize..6,
    ) {
        let rho = rho_grid(0.05, 1.0);
        let mut profiles: Vec<Profile> = slopes.iter().enumerate().map(|(i, s)| Profile {
            center_id: i,
            center: vec![0.0; 3],
            boundary_touching: false,
            phi: rho.iter().map(|r| 1.0 + s * r).collect(),
            rho: rho.clone(),
        }).collect();
        let before = monotonicity_check(&profiles, k, 1e-3, 0.0);
        let len = profiles.len();
        profiles.rotate_left(shift % len);
        for (i, p) in profiles.iter_mut().enumerate() {
            p.center_id = i;
        }
        let after = monotonicity_check(&profiles, k, 1e-3, 0.0);
        prop_assert_eq!(before.passed(), after.passed());
        prop_assert_eq!(before.violations.len(), after.violations.len());
        prop_assert_eq!(before.min_margin, after.min_margin);
    }

    #[test]
    fn margin_is_nondecreasing_in_k(slope in -1.0f64..1.0, k in 0.0f64..2.0, dk in 0.0f64..1.0) {
        let rho = rho_grid(0.05, 1.0);
        let prof = Profile {
            center_id: 0,
            center: vec![0.0; 3],
            boundary_touching: true,
            phi: rho.iter().map(|r| (1.0 + slope * r).max(0.0)).collect(),
            rho,
        };
        let a = monotonicity_check(std::slice::from_ref(&prof), k, 0.0, 0.0);
        let b = monotonicity_check(std::slice::from_ref(&prof), k + dk, 0.0, 0.0);
        prop_assert!(b.min_margin >= a.min_margin - 1e-12);
    }

    #[test]
    fn profiles_are_finite_and_rho_grids_increase(lo in 0.2f64..0.4, hi in 0.5f64..0.9) {
        let rhos = rho_grid(lo, hi);
        prop_assert!(rhos.windows(2).all(|w| w[1] > w[0]));
        let dom = ball(3, 1.0 / 12.0);
        let u = hedgehog(dom);
        let p = make_ginzburg_landau(3).unwrap();
        let phi = renormalized_profile(&u, 0.3, &p, &[0.1, 0.0, 0.0], &rhos).unwrap();
        prop_assert!(phi.iter().all(|f| f.is_finite()));
    }
}
