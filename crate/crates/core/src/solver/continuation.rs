use super::config::{EpsSchedule, SolverConfig};
use super::minimize::{minimize, ConvergenceRecord};
use crate::discretization::Field;
use crate::potentials::Potential;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Stage {
    pub index: usize,
    pub eps: f64,
    pub field: Field,
    pub record: ConvergenceRecord,
    /// `ε⁻² ∫ f(u_ε)`.
    pub potential_integral: f64,
}

/// Minimizes along the schedule, warm-starting each stage from the previous
/// minimizer unless the schedule says otherwise. `on_stage` sees each finished
/// stage before the next one starts; its errors abort the run unchanged.
pub fn continuation(
    schedule: &EpsSchedule,
    u0: &Field,
    p: &dyn Potential,
    cfg: &SolverConfig,
    mut on_stage: impl FnMut(&Stage) -> Result<()>,
) -> Result<Vec<Stage>> {
    schedule.validate()?;
    let mut stages: Vec<Stage> = Vec::with_capacity(schedule.eps.len());
    for (index, &eps) in schedule.eps.iter().enumerate() {
        let start = match stages.last() {
            Some(prev) if schedule.warm_start => &prev.field,
            _ => u0,
        };
        let (field, record) = minimize(start, eps, p, cfg).map_err(|e| Error::Stage {
            stage: index,
            eps,
            source: Box::new(e),
        })?;
        log::info!(
            "stage {index}: eps = {eps}, E = {:.6e}, {} iterations, residual {:.2e}{}",
            record.energy.total,
            record.iterations,
            record.grad_sup,
            if record.converged { "" } else { " (not converged)" }
        );
        let stage = Stage {
            index,
            eps,
            potential_integral: record.energy.potential,
            field,
            record,
        };
        on_stage(&stage)?;
        stages.push(stage);
    }
    Ok(stages)
}
