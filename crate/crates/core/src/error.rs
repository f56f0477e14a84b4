use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point at distance {distance:.3e} from the vacuum manifold is outside the tube of radius {radius:.3e}")]
    OutsideTube { distance: f64, radius: f64 },

    #[error("nearest-point projection is undefined at this point")]
    ProjectionUndefined,

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("node {node} is {class}, operation requires {required}")]
    NodeClass {
        node: usize,
        class: &'static str,
        required: &'static str,
    },

    #[error("ball radius {rho:.3e} is not resolved by grid spacing {h:.3e} (need rho > 2h)")]
    UnresolvedRadius { rho: f64, h: f64 },

    #[error("boundary data leaves the vacuum manifold at node {node}: f = {value:.3e}")]
    BoundaryOffManifold { node: usize, value: f64 },

    #[error("energy became non-finite at iteration {iteration}")]
    Diverged { iteration: usize },

    #[error("projected step left the manifold tube after {halvings} halvings")]
    StepLeftTube { halvings: usize },

    #[error("continuation stage {stage} (eps = {eps}) failed: {source}")]
    Stage {
        stage: usize,
        eps: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("diagnostics: {0}")]
    Diagnostics(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("malformed field file {path}: {reason}")]
    FieldFormat { path: PathBuf, reason: String },

    #[error("missing artifact {0}")]
    MissingArtifact(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
