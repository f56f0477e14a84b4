use serde::{Deserialize, Serialize};

use crate::discretization::{Domain, Field, Point};
use crate::{Error, Result};

/// A closed subset `X ⊂ closure(Ω)`, evaluated on active nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CompactSet {
    All {},
    /// `{r_min ≤ |x − c| ≤ r_max}`; no upper limit when `r_max` is absent.
    Annulus {
        center: Vec<f64>,
        r_min: f64,
        #[serde(default)]
        r_max: Option<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// Everything at distance at least `margin` from each point.
    Exclusion {
        points: Vec<Vec<f64>>,
        margin: f64,
    },
}

fn dist(x: &Point, c: &[f64]) -> f64 {
    c.iter().enumerate().map(|(d, v)| (x[d] - v).powi(2)).sum::<f64>().sqrt()
}

impl CompactSet {
    pub fn contains(&self, x: &Point) -> bool {
        const SLACK: f64 = 1e-12;
        match self {
            CompactSet::All {} => true,
            CompactSet::Annulus { center, r_min, r_max } => {
                let r = dist(x, center);
                r >= r_min - SLACK && r_max.is_none_or(|m| r <= m + SLACK)
            }
            CompactSet::Ball { center, radius } => dist(x, center) <= radius + SLACK,
            CompactSet::Exclusion { points, margin } => {
                points.iter().all(|p| dist(x, p) >= margin - SLACK)
            }
        }
    }

    /// Active nodes in the set, boundary nodes included.
    pub fn nodes(&self, domain: &Domain) -> Vec<usize> {
        domain
            .active()
            .iter()
            .copied()
            .filter(|&p| self.contains(&domain.grid.position(p)))
            .collect()
    }
}

/// `sup_X |u_ε − u_*|` for each `(ε, u_ε)`.
pub fn uniform_convergence_profile(fields: &[(f64, &Field)], u_star: &Field, x: &CompactSet) -> Result<Vec<(f64, f64)>> {
    let nodes = x.nodes(u_star.domain());
    if nodes.is_empty() {
        return Err(Error::Diagnostics(format!("compact set {x:?} contains no grid nodes")));
    }
    fields
        .iter()
        .map(|&(eps, u)| {
            if u.domain().grid != u_star.domain().grid || u.k() != u_star.k() {
                return Err(Error::Diagnostics("fields do not share a grid".into()));
            }
            Ok((eps, u.sup_distance(u_star, &nodes)))
        })
        .collect()
}
