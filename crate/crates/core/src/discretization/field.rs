use std::sync::Arc;

use super::domain::{Domain, NodeClass, Point};
use crate::{Error, Result};

/// A map from grid nodes to `ℝᵏ`, stored node-major with `k` contiguous components.
///
/// Exterior entries exist in storage but are zero and never read; the checked
/// accessors refuse them.
#[derive(Debug, Clone)]
pub struct Field {
    domain: Arc<Domain>,
    k: usize,
    values: Vec<f64>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.values == other.values && self.domain.grid == other.domain.grid
    }
}

impl Field {
    pub fn zeros(domain: Arc<Domain>, k: usize) -> Field {
        let len = domain.len() * k;
        Field {
            domain,
            k,
            values: vec![0.0; len],
        }
    }

    /// Evaluates `f` at every active node.
    pub fn from_fn(domain: Arc<Domain>, k: usize, mut f: impl FnMut(&Point) -> Vec<f64>) -> Result<Field> {
        let mut u = Field::zeros(domain, k);
        let active = u.domain.active().to_vec();
        for p in active {
            let v = f(&u.domain.grid.position(p));
            if v.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "field generator returned {} components, expected {k}",
                    v.len()
                )));
            }
            u.values[p * k..(p + 1) * k].copy_from_slice(&v);
        }
        Ok(u)
    }

    /// Wraps raw node-major values; exterior entries are zeroed.
    pub fn from_values(domain: Arc<Domain>, k: usize, mut values: Vec<f64>) -> Result<Field> {
        if k == 0 || values.len() != domain.len() * k {
            return Err(Error::InvalidParameter(format!(
                "{} values do not fit {} nodes with k = {k}",
                values.len(),
                domain.len()
            )));
        }
        for p in 0..domain.len() {
            if !domain.is_active(p) {
                values[p * k..(p + 1) * k].iter_mut().for_each(|v| *v = 0.0);
            }
        }
        Ok(Field { domain, k, values })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn domain_arc(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn n(&self) -> usize {
        self.domain.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> f64 {
        self.domain.h()
    }

    pub fn value(&self, node: usize) -> Result<&[f64]> {
        self.check(node)?;
        Ok(self.at(node))
    }

    pub fn set(&mut self, node: usize, v: &[f64]) -> Result<()> {
        self.check(node)?;
        if v.len() != self.k {
            return Err(Error::InvalidParameter(format!("expected {} components", self.k)));
        }
        self.at_mut(node).copy_from_slice(v);
        Ok(())
    }

    fn check(&self, node: usize) -> Result<()> {
        if node >= self.domain.len() {
            return Err(Error::InvalidParameter(format!("node {node} is off the grid")));
        }
        if self.domain.class(node) == NodeClass::Exterior {
            return Err(Error::NodeClass {
                node,
                class: "exterior",
                required: "interior or boundary",
            });
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn at(&self, node: usize) -> &[f64] {
        &self.values[node * self.k..(node + 1) * self.k]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, node: usize) -> &mut [f64] {
        let k = self.k;
        &mut self.values[node * k..(node + 1) * k]
    }

    /// Raw node-major storage, including the zeroed exterior entries.
    pub fn raw(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// `max |u(x)|` over active nodes.
    pub fn sup_norm(&self) -> f64 {
        self.domain
            .active()
            .iter()
            .map(|&p| norm(self.at(p)))
            .fold(0.0, f64::max)
    }

    /// `max |u(x) − v(x)|` over the given nodes.
    pub fn sup_distance(&self, other: &Field, nodes: &[usize]) -> f64 {
        nodes
            .iter()
            .map(|&p| {
                self.at(p)
                    .iter()
                    .zip(other.at(p))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}
