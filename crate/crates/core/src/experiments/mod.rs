//! Configuration-driven runs of the full pipeline, from continuation along an
//! `ε` schedule to the acceptance checks. Readers compare finished runs and
//! emit plot data.

mod centers;
mod checks;
mod compare;
mod config;
mod csv;
mod plot;
mod run;
mod summary;
mod svg;

pub use centers::auto_centers;
pub use checks::{gradient_consistency, hedgehog_dirichlet, normal_form_oracle, GradientCheck, NormalFormOracle};
pub use compare::{compare, format_diff, DiffRow};
pub use config::{
    AutoCenters, Centers, DiagnosticsConfig, NamedSet, PotentialSpec, Refinement, RunConfig, FAST_H,
};
pub use plot::emit_plot_data;
pub use run::{run, RunError, RunOptions};
pub use summary::{Criterion, RunSummary, Status};
pub use svg::{line_chart, Axis, Series};
