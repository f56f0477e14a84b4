//! Minimization of the discrete energy
//! `E_ε(u) = ½ Σ_edges hⁿ |Δu/h|² + ε⁻² Σ_interior hⁿ f(u)`
//! over interior node values, with boundary nodes held at their Dirichlet data.

mod config;
mod continuation;
mod energy;
mod harmonic;
mod initial;
mod minimize;
mod probe;

pub use config::{EpsSchedule, Method, SolverConfig};
pub use continuation::{continuation, Stage};
pub use energy::{energy, energy_gradient, energy_parts, pde_residual, EnergyParts};
pub use harmonic::{harmonic_map_minimize, HarmonicRecord};
pub use initial::{harmonic_extension, initial_guess, project_to_manifold};
pub use minimize::{minimize, write_trace_csv, ConvergenceRecord, TraceRow};
pub use probe::{restart_probe, RestartProbe, PROBE_GRAD_TOL};
