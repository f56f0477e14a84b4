use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde_json::json;

use super::centers::auto_centers;
use super::checks::{gradient_consistency, hedgehog_dirichlet, normal_form_oracle};
use super::config::{Centers, Refinement, RunConfig, FAST_H};
use super::csv::{num, opt, Table};
use super::summary::*;
use crate::diagnostics::{
    bochner_residual, diagnose, energy_density, fit_k, monotonicity_check, profiles_for_centers,
    propagation_check, rho_grid, singular_set_estimate, small_energy_witness, stress_tensor,
    uniform_convergence_profile, DiagnosticsReport, KFit, Profile, BOCHNER_QUANTILES,
};
use crate::discretization::{build_domain, io, Domain, Field, Point};
use crate::potentials::Potential;
use crate::solver::{
    continuation, harmonic_map_minimize, initial_guess, minimize, project_to_manifold, restart_probe,
    write_trace_csv, Stage,
};
use crate::Error;

/// Wall-clock budgets for the full and `--fast` runs.
pub const FULL_BUDGET_SECONDS: f64 = 600.0;
pub const FAST_BUDGET_SECONDS: f64 = 60.0;
const GRADIENT_BUDGET_SECONDS: f64 = 10.0;
const HEDGEHOG_H: f64 = 1.0 / 32.0;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub fast: bool,
    /// Overrides the configured output directory.
    pub out: Option<PathBuf>,
}

/// A failed run, classified by the phase that failed.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("schema error: {0}")]
    Schema(Error),
    #[error("solver failed: {0}")]
    Solver(Error),
    #[error("diagnostics failed: {0}")]
    Diagnostics(Error),
    #[error("cannot write artifacts: {0}")]
    Io(Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Schema(_) => 2,
            RunError::Solver(_) => 3,
            RunError::Diagnostics(_) => 4,
            RunError::Io(_) => 1,
        }
    }
}

fn io_err(e: impl Into<Error>) -> RunError {
    RunError::Io(e.into())
}

fn diag(e: Error) -> RunError {
    RunError::Diagnostics(e)
}

struct Companion {
    summary: RefinementSummary,
}

/// Runs the whole pipeline for `config` and writes its artifacts to the output
/// directory. Returns the summary that was written.
pub fn run(config: &RunConfig, opts: &RunOptions) -> Result<RunSummary, RunError> {
    let clock = Instant::now();
    let cfg = if opts.fast { config.clone().fast() } else { config.clone() };
    cfg.validate().map_err(RunError::Schema)?;
    let out = opts
        .out
        .clone()
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs").join(&cfg.name));
    std::fs::create_dir_all(out.join("checkpoints")).map_err(io_err)?;

    let potential = cfg.potential.build().map_err(RunError::Schema)?;
    let p: &dyn Potential = potential.as_ref();
    let dom = Arc::new(build_domain(&cfg.domain).map_err(RunError::Schema)?);
    let u0 = initial_guess(dom.clone(), &cfg.boundary, p).map_err(RunError::Schema)?;
    let h = dom.h();
    log::info!(
        "{}: h = {h:.5}, {} interior nodes, {} stages",
        cfg.name,
        dom.interior().len(),
        cfg.schedule.eps.len()
    );

    let stages = continuation(&cfg.schedule, &u0, p, &cfg.solver, |_| Ok(())).map_err(RunError::Solver)?;
    for s in &stages {
        let path = out.join("checkpoints").join(format!("stage_{}.rlx", s.index));
        io::write_field(&path, &s.field, json!({ "stage": s.index, "eps": s.eps, "run": cfg.name })).map_err(io_err)?;
        write_trace_csv(&out.join(format!("trace_stage_{}.csv", s.index)), &s.record.trace).map_err(io_err)?;
    }

    let last = stages.last().expect("schedule is nonempty");
    let mut start_star = last.field.clone();
    project_to_manifold(&mut start_star, p.manifold(), true);
    let hcfg = cfg.harmonic.clone().unwrap_or_else(|| cfg.solver.clone());
    let (u_star, harmonic) = harmonic_map_minimize(&start_star, p.manifold(), &hcfg).map_err(RunError::Solver)?;
    io::write_field(
        &out.join("checkpoints").join("u_star.rlx"),
        &u_star,
        json!({ "limit": true, "run": cfg.name }),
    )
    .map_err(io_err)?;
    log::info!("harmonic limit: Dirichlet energy {:.6}", harmonic.dirichlet);

    let d = &cfg.diagnostics;
    let centers: Vec<Point> = match &d.centers {
        Centers::Auto(_) => auto_centers(&cfg.domain),
        Centers::List(list) => list
            .iter()
            .map(|c| {
                let mut x = [0.0; 3];
                x[..c.len()].copy_from_slice(c);
                x
            })
            .collect(),
    };
    let rhos = rho_grid(d.rho_min_cells * h, 2.0 * d.rho_max);
    let rho_floor = rhos.first().copied().unwrap_or(0.0);
    let delta = d.bochner_delta.unwrap_or_else(|| p.manifold().tubular_radius());
    let reports: Vec<DiagnosticsReport> = stages
        .iter()
        .map(|s| diagnose(&s.field, s.eps, p, &centers, &rhos, delta))
        .collect::<Result<_, _>>()
        .map_err(diag)?;

    let fields: Vec<(f64, &Field)> = stages.iter().map(|s| (s.eps, &s.field)).collect();
    let main_set = cfg.convergence_set();
    let mut uniform = vec![SetProfile {
        name: "convergence_set".into(),
        asserted: true,
        values: uniform_convergence_profile(&fields, &u_star, &main_set).map_err(diag)?,
    }];
    for extra in cfg.extra_sets() {
        uniform.push(SetProfile {
            values: uniform_convergence_profile(&fields, &u_star, &extra.set).map_err(diag)?,
            name: extra.name,
            asserted: false,
        });
    }

    let tol = d.monotonicity_tolerance;
    let profile_sets: Vec<&[Profile]> = reports.iter().map(|r| r.profiles.as_slice()).collect();
    let k_fit = fit_k(&profile_sets, tol, rho_floor, &d.k_grid);
    let all_profiles: Vec<Profile> = reports.iter().flat_map(|r| r.profiles.iter().cloned()).collect();
    let propagation = propagation_check(&all_profiles, k_fit.k, tol);
    let witness_r = d.witness_radius.max(rho_floor);
    let witness_input: Vec<(f64, &Field, &[f64], &[Profile])> = stages
        .iter()
        .zip(&reports)
        .map(|(s, r)| (s.eps, &s.field, r.density.as_slice(), r.profiles.as_slice()))
        .collect();
    let witness = if rhos.is_empty() {
        small_energy_witness(&[], witness_r).map_err(diag)?
    } else {
        small_energy_witness(&witness_input, witness_r).map_err(diag)?
    };
    let singular = singular_set_estimate(&u_star, d.singular_theta, d.singular_scale).map_err(diag)?;

    let companion = match d.refinement {
        Refinement::Finer => Some(refined_companion(&cfg, p, &centers, &rhos, rho_floor, delta)?),
        Refinement::Off => None,
    };

    let probe = if d.restart_seeds.is_empty() {
        None
    } else {
        log::info!("restart probe at eps = {}", last.eps);
        Some(
            restart_probe(last.record.energy.total, &last.field, last.eps, p, &cfg.solver, &d.restart_seeds)
                .map_err(RunError::Solver)?,
        )
    };

    let stress_sweep = stress_sweep(&cfg, &stages, &u0, &dom, p, reports.last().expect("nonempty"))?;

    let grad_clock = Instant::now();
    let gradient = gradient_consistency(&cfg.domain_at(FAST_H), &cfg.boundary, p, cfg.schedule.eps[0], 50, cfg.seed)
        .map_err(diag)?;
    let gradient_seconds = grad_clock.elapsed().as_secs_f64();
    let checks = Checks {
        gradient,
        normal_form: normal_form_oracle(p, 100, cfg.seed).map_err(diag)?,
        hedgehog_dirichlet_ratio: hedgehog_dirichlet(HEDGEHOG_H).map_err(diag)?,
        hedgehog_h: HEDGEHOG_H,
        first_stage_reproduced: {
            let (again, _) = minimize(&u0, stages[0].eps, p, &cfg.solver).map_err(RunError::Solver)?;
            again.raw().iter().zip(stages[0].field.raw()).all(|(a, b)| a.to_bits() == b.to_bits())
        },
    };

    let ub_sup = dom
        .boundary()
        .iter()
        .map(|&b| u0.value(b).map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(diag)?
        .into_iter()
        .fold(0.0, f64::max);
    let uniform_bound = p.radial_growth_radius() + ub_sup + 1e-6;

    let stage_rows: Vec<StageSummary> = stages
        .iter()
        .zip(&reports)
        .zip(&uniform[0].values)
        .map(|((s, r), &(_, sup_dist))| StageSummary {
            eps: s.eps,
            energy: s.record.energy.total,
            dirichlet: s.record.energy.dirichlet,
            potential_integral: s.potential_integral,
            iterations: s.record.iterations,
            converged: s.record.converged,
            stalled: s.record.stalled,
            grad_sup: s.record.grad_sup,
            pde_residual_sup: r.pde_residual_sup,
            sup_norm: r.sup_norm,
            density_integral_gap: r.relative_integral_gap(),
            manifold_distance_sup: r.manifold_distance_sup,
            stress_div_sup: r.stress.div_sup,
            stress_div_l2: r.stress.div_l2,
            bochner_c: r.bochner.fitted_c,
            bochner_nodes: r.bochner.qualifying_nodes,
            boundary_normal_sup: r.boundary.normal_sup,
            boundary_tangential_sup: r.boundary.tangential_sup,
            boundary_gradient_sup: r.boundary.gradient_sup,
            boundary_distance_sup: r.boundary.boundary_distance_sup,
            near_boundary_distance_sup: r.boundary.near_boundary_distance_sup,
            sup_dist,
        })
        .collect();

    write_tables(&out, &stage_rows, &reports, &centers, &k_fit, rho_floor, tol, &uniform, &singular.nodes, &dom)?;

    let mut summary = RunSummary {
        name: cfg.name.clone(),
        fast: opts.fast,
        potential: p.name().to_string(),
        h,
        interior_nodes: dom.interior().len(),
        boundary_nodes: dom.boundary().len(),
        uniform_bound,
        centers: centers.len(),
        boundary_centers: reports[0].profiles.iter().filter(|p| p.boundary_touching).count(),
        rho: rhos.clone(),
        stages: stage_rows,
        harmonic,
        monotonicity_violations: reports
            .iter()
            .map(|r| monotonicity_check(&r.profiles, k_fit.k, tol, rho_floor).violations.len())
            .sum(),
        k_fit,
        propagation,
        witness,
        singular_set: SingularSummary {
            theta: singular.theta,
            scale: singular.scale,
            node_count: singular.nodes.len(),
            components: singular.components,
        },
        uniform_convergence: uniform,
        refinement: companion.map(|c| c.summary),
        restart_probe: probe,
        stress_sweep,
        checks,
        criteria: Vec::new(),
        timing: Timing {
            total_seconds: 0.0,
            budget_seconds: if opts.fast { FAST_BUDGET_SECONDS } else { FULL_BUDGET_SECONDS },
            gradient_check_seconds: gradient_seconds,
        },
    };
    summary.timing.total_seconds = clock.elapsed().as_secs_f64();
    summary.criteria = evaluate_criteria(&summary);
    summary.write(&out).map_err(io_err)?;
    log::info!("{} finished in {:.1} s", cfg.name, summary.timing.total_seconds);
    Ok(summary)
}

/// The same schedule at `h/2`, profiled at the same centers and radii.
fn refined_companion(
    cfg: &RunConfig,
    p: &dyn Potential,
    centers: &[Point],
    rhos: &[f64],
    rho_floor: f64,
    delta: f64,
) -> Result<Companion, RunError> {
    let spec = cfg.domain_at(0.5 * cfg.domain.h);
    let dom = Arc::new(build_domain(&spec).map_err(RunError::Schema)?);
    log::info!("refinement companion: h = {:.5}, {} interior nodes", spec.h, dom.interior().len());
    let u0 = initial_guess(dom.clone(), &cfg.boundary, p).map_err(RunError::Schema)?;
    let mut rows = Vec::new();
    let mut profiles: Vec<Vec<Profile>> = Vec::new();
    continuation(&cfg.schedule, &u0, p, &cfg.solver, |s: &Stage| {
        let e = energy_density(&s.field, s.eps, p)?;
        profiles.push(if rhos.is_empty() {
            Vec::new()
        } else {
            profiles_for_centers(&s.field, &e, centers, rhos)?
        });
        rows.push(RefinedStage {
            eps: s.eps,
            energy: s.record.energy.total,
            converged: s.record.converged,
            bochner_c: bochner_residual(&s.field, s.eps, p, delta)?.fitted_c,
        });
        Ok(())
    })
    .map_err(|e| match e {
        e @ Error::Stage { .. } => RunError::Solver(e),
        other => RunError::Diagnostics(other),
    })?;
    let sets: Vec<&[Profile]> = profiles.iter().map(|v| v.as_slice()).collect();
    let k_fit = fit_k(&sets, cfg.diagnostics.monotonicity_tolerance, rho_floor, &cfg.diagnostics.k_grid);
    Ok(Companion {
        summary: RefinementSummary {
            h: spec.h,
            interior_nodes: dom.interior().len(),
            stages: rows,
            k_fit,
        },
    })
}

/// Re-solves the last stage from its starting point with `grad_tol / 10`, and
/// evaluates the stress divergence of a constant `N`-valued field.
fn stress_sweep(
    cfg: &RunConfig,
    stages: &[Stage],
    u0: &Field,
    dom: &Arc<Domain>,
    p: &dyn Potential,
    last_report: &DiagnosticsReport,
) -> Result<StressSweep, RunError> {
    let last = stages.last().expect("nonempty");
    let start = match stages.len() {
        n if n > 1 && cfg.schedule.warm_start => &stages[n - 2].field,
        _ => u0,
    };
    let mut tight = cfg.solver.clone();
    tight.grad_tol /= 10.0;
    let (ut, rt) = minimize(start, last.eps, p, &tight).map_err(RunError::Solver)?;
    let tightened = stress_tensor(&ut, last.eps, p).map_err(diag)?;
    let q = p.manifold().reference_point();
    let constant = Field::from_fn(dom.clone(), p.dim(), |_| q.as_slice().to_vec()).map_err(diag)?;
    Ok(StressSweep {
        eps: last.eps,
        grad_tol: cfg.solver.grad_tol,
        div_sup: last_report.stress.div_sup,
        tightened_grad_tol: tight.grad_tol,
        tightened_div_sup: tightened.div_sup,
        tightened_converged: rt.converged,
        tightened_grad_sup: rt.grad_sup,
        constant_field_div_sup: stress_tensor(&constant, last.eps, p).map_err(diag)?.div_sup,
    })
}

#[allow(clippy::too_many_arguments)]
fn write_tables(
    out: &Path,
    stages: &[StageSummary],
    reports: &[DiagnosticsReport],
    centers: &[Point],
    k_fit: &KFit,
    rho_floor: f64,
    tol: f64,
    uniform: &[SetProfile],
    singular_nodes: &[usize],
    dom: &Domain,
) -> Result<(), RunError> {
    let n = dom.n();
    let mut t = Table::new(&["eps", "sup_dist", "pde_residual", "potential_integral", "boundary_grad_sup"]);
    for s in stages {
        t.push(vec![
            num(s.eps),
            num(s.sup_dist),
            num(s.pde_residual_sup),
            num(s.potential_integral),
            num(s.boundary_gradient_sup),
        ]);
    }
    t.write(&out.join("convergence.csv")).map_err(io_err)?;

    let mut t = Table::new(&[
        "eps",
        "energy",
        "dirichlet",
        "potential_integral",
        "iterations",
        "converged",
        "grad_sup",
        "sup_norm",
        "manifold_distance_sup",
        "stress_div_sup",
        "stress_div_l2",
        "boundary_normal_sup",
        "boundary_tangential_sup",
        "boundary_distance_sup",
    ]);
    for s in stages {
        t.push(vec![
            num(s.eps),
            num(s.energy),
            num(s.dirichlet),
            num(s.potential_integral),
            s.iterations.to_string(),
            s.converged.to_string(),
            num(s.grad_sup),
            num(s.sup_norm),
            num(s.manifold_distance_sup),
            num(s.stress_div_sup),
            num(s.stress_div_l2),
            num(s.boundary_normal_sup),
            num(s.boundary_tangential_sup),
            num(s.boundary_distance_sup),
        ]);
    }
    t.write(&out.join("stages.csv")).map_err(io_err)?;

    let mut header = vec!["eps".to_string(), "fitted_C".into(), "qualifying_nodes".into()];
    header.extend(BOCHNER_QUANTILES.iter().map(|q| format!("q{}", (q * 100.0).round())));
    let mut t = Table {
        header,
        rows: Vec::new(),
    };
    for r in reports {
        let mut row = vec![num(r.eps), opt(r.bochner.fitted_c), r.bochner.qualifying_nodes.to_string()];
        for (i, _) in BOCHNER_QUANTILES.iter().enumerate() {
            row.push(opt(r.bochner.quantiles.get(i).map(|q| q.1)));
        }
        t.push(row);
    }
    t.write(&out.join("bochner.csv")).map_err(io_err)?;

    let mut phi = Table::new(&["eps", "center_id", "rho", "phi", "psi"]);
    let mut margins = Table::new(&["eps", "center_id", "rho", "margin"]);
    for r in reports {
        for prof in &r.profiles {
            for ((rho, f), psi) in prof.rho.iter().zip(&prof.phi).zip(prof.psi(k_fit.k)) {
                phi.push(vec![num(r.eps), prof.center_id.to_string(), num(*rho), num(*f), num(psi)]);
            }
        }
        for m in monotonicity_check(&r.profiles, k_fit.k, tol, rho_floor).margins {
            margins.push(vec![num(r.eps), m.center_id.to_string(), num(m.rho), num(m.margin)]);
        }
    }
    phi.write(&out.join("phi_profiles.csv")).map_err(io_err)?;
    margins.write(&out.join("monotonicity.csv")).map_err(io_err)?;

    let mut t = Table::new(&["center_id", "x", "y", "z", "boundary_touching"]);
    let touching = reports.first().map(|r| r.profiles.as_slice()).unwrap_or(&[]);
    for (i, c) in centers.iter().enumerate() {
        let b = touching.get(i).map(|p| p.boundary_touching).unwrap_or(false);
        t.push(vec![i.to_string(), num(c[0]), num(c[1]), num(c[2]), b.to_string()]);
    }
    t.write(&out.join("centers.csv")).map_err(io_err)?;

    let mut t = Table::new(&["set", "eps", "sup_dist"]);
    for s in uniform {
        for &(eps, v) in &s.values {
            t.push(vec![s.name.clone(), num(eps), num(v)]);
        }
    }
    t.write(&out.join("uniform_convergence.csv")).map_err(io_err)?;

    let mut t = Table::new(&["node", "x", "y", "z"]);
    for &node in singular_nodes {
        let x = dom.grid.position(node);
        t.push(vec![node.to_string(), num(x[0]), num(x[1]), num(if n > 2 { x[2] } else { 0.0 })]);
    }
    t.write(&out.join("singular_set.csv")).map_err(io_err)?;
    Ok(())
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn all_zero(v: &[f64]) -> bool {
    v.iter().all(|x| x.abs() <= 1e-12)
}

/// One PASS/FAIL line per acceptance criterion, from the summary alone.
pub(crate) fn evaluate_criteria(s: &RunSummary) -> Vec<Criterion> {
    let mut out = Vec::new();
    let mut push = |id: u8, name: &str, ok: bool, detail: String| {
        out.push(Criterion {
            id,
            name: name.to_string(),
            status: Status::from_bool(ok),
            detail,
        })
    };

    let g = &s.checks.gradient;
    push(
        1,
        "gradient consistency",
        g.max_relative_error <= 1e-6 && s.timing.gradient_check_seconds < GRADIENT_BUDGET_SECONDS,
        format!("max relative error {:.3e} over {} directions at h = {:.4}", g.max_relative_error, g.perturbations, g.h),
    );

    let nf = &s.checks.normal_form;
    push(
        2,
        "normal-form oracle",
        (nf.gl1_value - 4.41).abs() <= 1e-8 && nf.residual <= 1e-8,
        format!("A(1.1) = {:.12}, max residual {:.3e} over {} tube samples", nf.gl1_value, nf.residual, nf.samples),
    );

    let ratio = s.checks.hedgehog_dirichlet_ratio;
    push(
        3,
        "hedgehog Dirichlet anchor",
        (ratio - 1.0).abs() <= 0.05,
        format!("discrete energy / 4π = {ratio:.5} at h = {:.5}", s.checks.hedgehog_h),
    );

    let sup = s.stages.iter().map(|st| st.sup_norm).fold(0.0, f64::max);
    push(
        4,
        "uniform bound",
        sup <= s.uniform_bound,
        format!("max ‖u‖∞ = {sup:.9} against bound {:.9}", s.uniform_bound),
    );

    let pot: Vec<f64> = s.stages.iter().map(|st| st.potential_integral).collect();
    push(
        5,
        "vanishing potential",
        all_zero(&pot) || strictly_decreasing(&pot),
        format!("ε⁻²∫f = {}", list(&pot)),
    );

    let k = &s.k_fit;
    let (stable, refine_note) = match &s.refinement {
        Some(r) => (
            !r.k_fit.capped && k.index.abs_diff(r.k_fit.index) <= 1,
            format!("K = {:.4e} at h/2 (grid step {} vs {})", r.k_fit.k, r.k_fit.index, k.index),
        ),
        None => (false, "no refinement companion".into()),
    };
    push(
        6,
        "monotonicity",
        !k.capped
            && k.margins_tested > 0
            && s.monotonicity_violations == 0
            && s.centers >= 20
            && s.boundary_centers > 0
            && stable,
        format!(
            "K = {:.4e}{}, min margin {:.3e} over {} margins, {} centers ({} on the boundary); {}",
            k.k,
            if k.capped { " (capped)" } else { "" },
            k.min_margin,
            k.margins_tested,
            s.centers,
            s.boundary_centers,
            refine_note
        ),
    );

    let conv: Vec<f64> = s.uniform_convergence[0].values.iter().map(|v| v.1).collect();
    let trend = all_zero(&conv)
        || (strictly_decreasing(&conv) && conv.last().copied().unwrap_or(f64::INFINITY) < 0.5 * conv[0]);
    push(7, "uniform convergence trend", trend, format!("sup_X |u_ε − u_*| = {}", list(&conv)));

    let cs: Vec<Option<f64>> = s.stages.iter().map(|st| st.bochner_c).collect();
    let finite = cs.iter().all(|c| c.is_some_and(f64::is_finite));
    let (bochner_ok, bochner_note) = match &s.refinement {
        Some(r) => {
            let worst = cs
                .iter()
                .zip(&r.stages)
                .map(|(a, b)| match (*a, b.bochner_c) {
                    (Some(a), Some(b)) if a == 0.0 && b == 0.0 => 1.0,
                    (Some(a), Some(b)) if a > 0.0 && b > 0.0 => a.max(b) / a.min(b),
                    _ => f64::INFINITY,
                })
                .fold(1.0, f64::max);
            (worst < 2.0, format!("largest h vs h/2 ratio {worst:.3}"))
        }
        None => (false, "no refinement companion".into()),
    };
    let shown: Vec<f64> = cs.iter().map(|c| c.unwrap_or(f64::NAN)).collect();
    push(8, "Bochner residual", finite && bochner_ok, format!("C = {}; {bochner_note}", list(&shown)));

    let sw = &s.stress_sweep;
    let decreases = sw.tightened_div_sup < sw.div_sup || (sw.div_sup <= 1e-12 && sw.tightened_div_sup <= 1e-12);
    push(
        9,
        "stress-energy divergence",
        decreases && sw.constant_field_div_sup <= 1e-12,
        format!(
            "div sup {:.9e} at grad_tol {:.0e}, {:.9e} at {:.0e}; constant field {:.1e}",
            sw.div_sup, sw.grad_tol, sw.tightened_div_sup, sw.tightened_grad_tol, sw.constant_field_div_sup
        ),
    );

    let bg: Vec<f64> = s.stages.iter().map(|st| st.boundary_gradient_sup).collect();
    let g0 = bg[0];
    let bounded = all_zero(&bg) || bg.iter().all(|&v| v <= 2.0 * g0 && v >= 0.5 * g0);
    let bd = s.stages.iter().map(|st| st.boundary_distance_sup).fold(0.0, f64::max);
    push(
        10,
        "boundary gradients",
        bounded && bd <= 1e-10,
        format!("sup_∂Ω |∇u| = {}; sup_∂Ω dist(u, N) = {bd:.2e}", list(&bg)),
    );

    push(
        11,
        "determinism and runtime",
        s.checks.first_stage_reproduced && s.timing.total_seconds <= s.timing.budget_seconds,
        format!(
            "first stage reproduced bit for bit: {}; budget {:.0} s",
            s.checks.first_stage_reproduced, s.timing.budget_seconds
        ),
    );
    out
}

fn list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}
