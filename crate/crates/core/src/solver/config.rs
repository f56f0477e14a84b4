use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Barzilai–Borwein steps on the residual per unit volume.
    BarzilaiBorwein,
    /// Barzilai–Borwein steps in the metric of the diagonal (Jacobi) preconditioner.
    Preconditioned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub method: Method,
    pub max_iters: usize,
    /// Tolerance on the sup-norm of the interior residual per unit volume.
    pub grad_tol: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Preconditioned,
            max_iters: 50_000,
            grad_tol: 1e-6,
            min_step: 1e-14,
            max_step: 1e6,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidParameter("grad_tol must be positive".into()));
        }
        if !(self.min_step > 0.0 && self.max_step > self.min_step && self.max_step.is_finite()) {
            return Err(Error::InvalidParameter("need 0 < min_step < max_step < ∞".into()));
        }
        Ok(())
    }
}

/// Strictly decreasing positive `ε` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsSchedule {
    pub eps: Vec<f64>,
    #[serde(default = "yes")]
    pub warm_start: bool,
}

fn yes() -> bool {
    true
}

impl EpsSchedule {
    pub fn new(eps: Vec<f64>) -> Result<Self> {
        let s = Self { eps, warm_start: true };
        s.validate()?;
        Ok(s)
    }

    /// `count` values from `first` down to `last`, geometrically spaced.
    pub fn geometric(first: f64, last: f64, count: usize) -> Result<Self> {
        if count == 1 {
            return Self::new(vec![first]);
        }
        let ratio = (last / first).powf(1.0 / (count - 1) as f64);
        Self::new((0..count).map(|i| first * ratio.powi(i as i32)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps.is_empty() {
            return Err(Error::InvalidParameter("empty eps schedule".into()));
        }
        if self.eps.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(Error::InvalidParameter("eps values must be positive and finite".into()));
        }
        if self.eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidParameter("eps schedule must be strictly decreasing".into()));
        }
        Ok(())
    }
}
