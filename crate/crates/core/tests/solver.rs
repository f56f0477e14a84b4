use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaxlab::discretization::{build_domain, BoundaryData, Domain, DomainKind, DomainSpec, Field};
use relaxlab::experiments::gradient_consistency;
use relaxlab::potentials::{make_ginzburg_landau, make_landau_de_gennes, GinzburgLandau, Potential, VacuumManifold};
use relaxlab::solver::{
    continuation, energy, energy_gradient, energy_parts, harmonic_map_minimize, initial_guess, minimize, pde_residual,
    restart_probe, EpsSchedule, SolverConfig,
};
use relaxlab::Error;

fn ball_spec(h: f64) -> DomainSpec {
    DomainSpec {
        kind: DomainKind::Ball {
            center: vec![0.0; 3],
            radius: 1.0,
        },
        lo: vec![-1.0; 3],
        hi: vec![1.0; 3],
        h,
    }
}

fn ball(h: f64) -> Arc<Domain> {
    Arc::new(build_domain(&ball_spec(h)).unwrap())
}

fn cube(h: f64) -> Arc<Domain> {
    Arc::new(
        build_domain(&DomainSpec {
            kind: DomainKind::Box {
                lo: vec![-1.0; 3],
                hi: vec![1.0; 3],
            },
            lo: vec![-1.0; 3],
            hi: vec![1.0; 3],
            h,
        })
        .unwrap(),
    )
}

fn hedgehog(h: f64, p: &dyn Potential) -> Field {
    initial_guess(ball(h), &BoundaryData::Hedgehog { center: None }, p).unwrap()
}

fn perturbed(u: &Field, amplitude: f64, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = u.clone();
    for &node in u.domain().interior() {
        let w: Vec<f64> = u.value(node).unwrap().iter().map(|x| x + rng.random_range(-amplitude..amplitude)).collect();
        v.set(node, &w).unwrap();
    }
    v
}

fn boundary_values(u: &Field) -> Vec<f64> {
    u.domain().boundary().iter().flat_map(|&b| u.value(b).unwrap().to_vec()).collect()
}

/// `c · f`, to check that the two energy parts scale independently.
#[derive(Debug)]
struct Scaled(GinzburgLandau, f64);

impl Potential for Scaled {
    fn name(&self) -> &str {
        "scaled"
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, z: &[f64]) -> f64 {
        self.1 * self.0.eval(z)
    }
    fn grad_into(&self, z: &[f64], out: &mut [f64]) {
        self.0.grad_into(z, out);
        out.iter_mut().for_each(|o| *o *= self.1);
    }
    fn hess(&self, z: &[f64]) -> DMatrix<f64> {
        self.0.hess(z) * self.1
    }
    fn radial_growth_radius(&self) -> f64 {
        self.0.radial_growth_radius()
    }
    fn manifold(&self) -> &dyn VacuumManifold {
        self.0.manifold()
    }
}

#[test]
fn constant_vacuum_field_is_a_global_minimum() {
    let p = make_ginzburg_landau(3).unwrap();
    let q = vec![0.0, 0.0, 1.0];
    let u = initial_guess(cube(1.0 / 8.0), &BoundaryData::Constant { value: q.clone() }, &p).unwrap();
    assert_eq!(energy(&u, 0.1, &p).unwrap(), 0.0);
    assert_eq!(energy_gradient(&u, 0.1, &p).unwrap().sup_norm(), 0.0);
    let (v, rec) = minimize(&u, 0.1, &p, &SolverConfig::default()).unwrap();
    assert_eq!(rec.iterations, 0);
    assert!(rec.converged);
    assert_eq!(v.raw(), u.raw());
}

#[test]
fn nonpositive_eps_is_rejected() {
    let p = make_ginzburg_landau(3).unwrap();
    let u = hedgehog(1.0 / 8.0, &p);
    for eps in [0.0, -0.1, f64::NAN] {
        assert!(matches!(energy(&u, eps, &p), Err(Error::InvalidParameter(_))));
        assert!(energy_gradient(&u, eps, &p).is_err());
        assert!(minimize(&u, eps, &p, &SolverConfig::default()).is_err());
    }
}

#[test]
fn nonfinite_start_aborts() {
    let p = make_ginzburg_landau(3).unwrap();
    let mut u = hedgehog(1.0 / 8.0, &p);
    let node = u.domain().interior()[10];
    u.set(node, &[f64::NAN, 0.0, 0.0]).unwrap();
    assert!(minimize(&u, 0.2, &p, &SolverConfig::default()).is_err());
}

fn directional_check(u: &Field, eps: f64, p: &dyn Potential, directions: usize, seed: u64) -> f64 {
    const STEP: f64 = 1e-5;
    let g = energy_gradient(u, eps, p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..directions {
        let (mut plus, mut minus) = (u.clone(), u.clone());
        let mut dot = 0.0;
        for &node in u.domain().interior() {
            let d: Vec<f64> = (0..u.k()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let base = u.value(node).unwrap();
            let up: Vec<f64> = base.iter().zip(&d).map(|(x, e)| x + STEP * e).collect();
            let dn: Vec<f64> = base.iter().zip(&d).map(|(x, e)| x - STEP * e).collect();
            plus.set(node, &up).unwrap();
            minus.set(node, &dn).unwrap();
            dot += g.value(node).unwrap().iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
        }
        let fd = (energy(&plus, eps, p).unwrap() - energy(&minus, eps, p).unwrap()) / (2.0 * STEP);
        worst = worst.max((fd - dot).abs() / dot.abs());
    }
    worst
}

#[test]
fn gradient_matches_central_differences() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u = perturbed(&hedgehog(1.0 / 8.0, &gl), 0.1, 1);
    assert!(directional_check(&u, 0.2, &gl, 50, 2) <= 1e-6);

    let ldg = make_landau_de_gennes(-1.0, 1.0, 1.0).unwrap();
    let u = perturbed(&hedgehog(1.0 / 8.0, &ldg), 0.05, 3);
    assert!(directional_check(&u, 0.2, &ldg, 50, 4) <= 1e-6);
}

#[test]
fn gradient_check_at_the_fast_resolution_is_quick() {
    let gl = make_ginzburg_landau(3).unwrap();
    let t = Instant::now();
    let c = gradient_consistency(&ball_spec(1.0 / 12.0), &BoundaryData::Hedgehog { center: None }, &gl, 0.1, 50, 7)
        .unwrap();
    assert!(c.max_relative_error <= 1e-6, "{}", c.max_relative_error);
    assert!(t.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn energy_parts_scale_separately() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u = perturbed(&hedgehog(1.0 / 8.0, &gl), 0.2, 5);
    let a = energy_parts(&u, 0.3, &gl).unwrap();
    let b = energy_parts(&u, 0.3, &Scaled(gl, 4.0)).unwrap();
    assert_eq!(a.dirichlet, b.dirichlet);
    assert!((b.potential - 4.0 * a.potential).abs() <= 1e-13 * b.potential);
    assert!((a.total - a.dirichlet - a.potential).abs() <= 1e-13 * a.total);
}

#[test]
fn relaxation_lowers_the_hedgehog_energy_monotonically() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u0 = hedgehog(1.0 / 16.0, &gl);
    let before = boundary_values(&u0);
    let e0 = energy(&u0, 0.25, &gl).unwrap();
    let (u, rec) = minimize(&u0, 0.25, &gl, &SolverConfig::default()).unwrap();
    assert!(rec.converged, "{rec:?}");
    assert!(rec.energy.total < e0);
    assert_eq!(rec.initial_energy, e0);
    for w in rec.trace.windows(2) {
        assert!(w[1].energy <= w[0].energy, "{} after {}", w[1].energy, w[0].energy);
    }
    assert_eq!(boundary_values(&u), before);
    // a bounded minimizer of a potential with R = 1 and unit boundary data
    assert!(u.sup_norm() <= 2.0 + 1e-6);
    let (sup, l2) = pde_residual(&u, 0.25, &gl).unwrap();
    assert_eq!(l2, rec.pde_residual);
    assert!(sup >= l2 / (4.0 * PI / 3.0).sqrt());
}

#[test]
fn tighter_tolerance_does_not_raise_the_residual() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u0 = hedgehog(1.0 / 10.0, &gl);
    let mut last = f64::INFINITY;
    for tol in [1e-2, 5e-3, 2.5e-3, 1.25e-3] {
        let cfg = SolverConfig {
            grad_tol: tol,
            ..SolverConfig::default()
        };
        let (_, rec) = minimize(&u0, 0.3, &gl, &cfg).unwrap();
        assert!(rec.converged);
        assert!(rec.grad_sup <= tol);
        assert!(rec.pde_residual <= last, "{} after {last} at {tol}", rec.pde_residual);
        last = rec.pde_residual;
    }
}

#[test]
fn single_stage_continuation_is_minimize() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u0 = hedgehog(1.0 / 10.0, &gl);
    let cfg = SolverConfig::default();
    let stages = continuation(&EpsSchedule::new(vec![0.3]).unwrap(), &u0, &gl, &cfg, |_| Ok(())).unwrap();
    let (u, rec) = minimize(&u0, 0.3, &gl, &cfg).unwrap();
    assert_eq!(stages.len(), 1);
    assert_eq!(stages[0].field.raw(), u.raw());
    assert_eq!(stages[0].record.iterations, rec.iterations);
    assert_eq!(stages[0].potential_integral, rec.energy.potential);
}

#[test]
fn continuation_warm_starts_and_drains_the_potential() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u0 = hedgehog(1.0 / 10.0, &gl);
    let cfg = SolverConfig::default();
    let eps = vec![0.4, 0.3, 0.2, 0.15, 0.1];
    let mut seen = Vec::new();
    let stages = continuation(&EpsSchedule::new(eps.clone()).unwrap(), &u0, &gl, &cfg, |s| {
        seen.push(s.index);
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, vec![0, 1, 2, 3, 4]);
    for w in stages.windows(2) {
        assert!(w[1].potential_integral < w[0].potential_integral);
    }

    let cold_schedule = EpsSchedule {
        eps,
        warm_start: false,
    };
    let cold = continuation(&cold_schedule, &u0, &gl, &cfg, |_| Ok(())).unwrap();
    assert_eq!(cold[0].field.raw(), stages[0].field.raw());
    assert!(stages[1].record.iterations <= cold[1].record.iterations);
}

#[test]
fn continuation_reports_the_failing_stage() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u0 = hedgehog(1.0 / 8.0, &gl);
    let err = continuation(
        &EpsSchedule::new(vec![0.4, 0.3]).unwrap(),
        &u0,
        &gl,
        &SolverConfig::default(),
        |s| if s.index == 1 { Err(Error::InvalidParameter("stop".into())) } else { Ok(()) },
    )
    .unwrap_err();
    assert!(matches!(err, Error::InvalidParameter(_)));
}

#[test]
fn harmonic_map_with_constant_data_is_constant() {
    let gl = make_ginzburg_landau(3).unwrap();
    let q = [0.0, 0.6, 0.8];
    let u0 = perturbed(
        &initial_guess(cube(1.0 / 8.0), &BoundaryData::Constant { value: q.to_vec() }, &gl).unwrap(),
        0.2,
        9,
    );
    let (u, rec) = harmonic_map_minimize(&u0, gl.manifold(), &SolverConfig::default()).unwrap();
    assert!(rec.converged);
    for &node in u.domain().active() {
        let v = u.value(node).unwrap();
        assert!(v.iter().zip(&q).all(|(a, b)| (a - b).abs() < 1e-6), "{v:?}");
    }
}

#[test]
fn harmonic_hedgehog_is_the_radial_map() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u0 = hedgehog(1.0 / 16.0, &gl);
    let (u, rec) = harmonic_map_minimize(&u0, gl.manifold(), &SolverConfig::default()).unwrap();
    assert!(rec.max_manifold_distance <= 1e-10);
    assert!((rec.dirichlet - 4.0 * PI).abs() <= 0.05 * 4.0 * PI, "{}", rec.dirichlet);
    // L² distance to x/|x|
    let dom = u.domain();
    let mut l2 = 0.0;
    for &node in dom.interior() {
        let x = dom.grid.position(node);
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r > 0.0 {
            let v = u.value(node).unwrap();
            l2 += (0..3).map(|c| (v[c] - x[c] / r).powi(2)).sum::<f64>();
        }
    }
    let l2 = (l2 * dom.grid.cell_volume()).sqrt();
    assert!(l2 < 0.1, "{l2}");

    // the N-valued limit is a competitor for every eps
    let (ue, _) = minimize(&u0, 0.2, &gl, &SolverConfig::default()).unwrap();
    assert!(energy(&ue, 0.2, &gl).unwrap() <= rec.dirichlet);
}

#[test]
fn restart_probe_does_not_flag_the_converged_hedgehog() {
    let gl = make_ginzburg_landau(3).unwrap();
    let u0 = hedgehog(1.0 / 10.0, &gl);
    let cfg = SolverConfig::default();
    let (u, rec) = minimize(&u0, 0.3, &gl, &cfg).unwrap();
    let probe = restart_probe(rec.energy.total, &u, 0.3, &gl, &cfg, &[1, 2, 3]).unwrap();
    assert_eq!(probe.energies.len(), 3);
    assert!(!probe.flagged, "{probe:?}");
}

#[test]
fn config_validation() {
    assert!(SolverConfig::default().validate().is_ok());
    let bad = [
        SolverConfig {
            max_iters: 0,
            ..SolverConfig::default()
        },
        SolverConfig {
            grad_tol: 0.0,
            ..SolverConfig::default()
        },
        SolverConfig {
            min_step: -1.0,
            ..SolverConfig::default()
        },
    ];
    for c in bad {
        assert!(c.validate().is_err(), "{c:?}");
    }
}

proptest! {
    #[test]
    fn schedules_must_decrease_strictly(eps in prop::collection::vec(0.01f64..1.0, 1..8)) {
        let decreasing = eps.windows(2).all(|w| w[1] < w[0]);
        prop_assert_eq!(EpsSchedule::new(eps.clone()).is_ok(), decreasing);
        let mut sorted = eps.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sorted.dedup();
        prop_assert!(EpsSchedule::new(sorted).is_ok());
    }

    #[test]
    fn geometric_schedules_are_valid(first in 0.2f64..1.0, ratio in 0.1f64..0.9, count in 2usize..8) {
        let s = EpsSchedule::geometric(first, first * ratio, count).unwrap();
        prop_assert_eq!(s.eps.len(), count);
        prop_assert!((s.eps[0] - first).abs() < 1e-12);
        prop_assert!(s.validate().is_ok());
    }
}
