use serde::{Deserialize, Serialize};

use super::domain::Domain;
use super::field::Field;
use crate::potentials::{uniaxial_point, ManifoldTag, Potential, VacuumManifold};
use crate::{Error, Result};

/// Dirichlet data `u_b` on the boundary nodes, valued in the vacuum manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryData {
    /// Radial map `x ↦ (x − c)/|x − c|`, or its uniaxial lift `s*(n⊗n − I/3)`.
    Hedgehog {
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    /// The manifold point aligned with the first axis: `e₁` or `s*(e₁⊗e₁ − I/3)`.
    EquatorConstant,
    /// An explicit constant, which must lie on the manifold.
    Constant { value: Vec<f64> },
    /// One value per boundary node, in the domain's boundary order.
    Table { values: Vec<Vec<f64>> },
}

impl BoundaryData {
    pub fn tag(&self) -> &'static str {
        match self {
            BoundaryData::Hedgehog { .. } => "hedgehog",
            BoundaryData::EquatorConstant => "equator-constant",
            BoundaryData::Constant { .. } => "constant",
            BoundaryData::Table { .. } => "user-table",
        }
    }

    /// Values at each boundary node, in `domain.boundary()` order, each checked
    /// to satisfy `f(q) ≤ 1e−10`.
    pub fn generate(&self, domain: &Domain, p: &dyn Potential) -> Result<Vec<Vec<f64>>> {
        let m = p.manifold();
        let k = p.dim();
        let n = domain.n();
        let values: Vec<Vec<f64>> = match self {
            BoundaryData::Hedgehog { center } => {
                let c = center.clone().unwrap_or_else(|| vec![0.0; n]);
                if c.len() != n {
                    return Err(Error::InvalidParameter("hedgehog center has the wrong dimension".into()));
                }
                domain
                    .boundary()
                    .iter()
                    .map(|&node| {
                        let x = domain.grid.position(node);
                        let mut dir = [0.0; 3];
                        for d in 0..n {
                            dir[d] = x[d] - c[d];
                        }
                        let r = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                        if r < 1e-12 {
                            return Err(Error::InvalidParameter(
                                "hedgehog center lies on a boundary node".into(),
                            ));
                        }
                        dir.iter_mut().for_each(|v| *v /= r);
                        lift_direction(m, &dir, n)
                    })
                    .collect::<Result<_>>()?
            }
            BoundaryData::EquatorConstant => {
                let v = lift_direction(m, &[1.0, 0.0, 0.0], 3)?;
                vec![v; domain.boundary().len()]
            }
            BoundaryData::Constant { value } => vec![value.clone(); domain.boundary().len()],
            BoundaryData::Table { values } => {
                if values.len() != domain.boundary().len() {
                    return Err(Error::InvalidParameter(format!(
                        "boundary table has {} rows for {} boundary nodes",
                        values.len(),
                        domain.boundary().len()
                    )));
                }
                values.clone()
            }
        };
        for (i, v) in values.iter().enumerate() {
            if v.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "boundary value has {} components, potential expects {k}",
                    v.len()
                )));
            }
            let fv = p.eval(v);
            if !(fv <= 1e-10) {
                return Err(Error::BoundaryOffManifold {
                    node: domain.boundary()[i],
                    value: fv,
                });
            }
        }
        Ok(values)
    }

    /// Writes the boundary values into `u`.
    pub fn apply(&self, u: &mut Field, p: &dyn Potential) -> Result<()> {
        let values = self.generate(u.domain(), p)?;
        let nodes = u.domain().boundary().to_vec();
        for (node, v) in nodes.into_iter().zip(values) {
            u.set(node, &v)?;
        }
        Ok(())
    }
}

fn lift_direction(m: &dyn VacuumManifold, dir: &[f64; 3], n: usize) -> Result<Vec<f64>> {
    match m.tag() {
        ManifoldTag::Sphere { k } if k >= n => {
            let mut v = vec![0.0; k];
            v[..n].copy_from_slice(&dir[..n]);
            Ok(v)
        }
        ManifoldTag::UniaxialQTensors { s } => Ok(uniaxial_point(s, dir).to_vec()),
        tag => Err(Error::InvalidParameter(format!(
            "no radial boundary map into {tag:?} for n = {n}"
        ))),
    }
}
