use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Grid coordinates padded to three components; unused axes are zero.
pub type Point = [f64; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub dims: Vec<usize>,
    pub strides: Vec<usize>,
    pub h: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multi_index(&self, node: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        let mut rest = node;
        for d in 0..self.n {
            idx[d] = rest / self.strides[d];
            rest %= self.strides[d];
        }
        idx
    }

    pub fn node_at(&self, idx: &[usize]) -> usize {
        (0..self.n).map(|d| idx[d] * self.strides[d]).sum()
    }

    pub fn position(&self, node: usize) -> Point {
        let idx = self.multi_index(node);
        let mut x = [0.0; 3];
        for d in 0..self.n {
            x[d] = self.lo[d] + idx[d] as f64 * self.h;
        }
        x
    }

    /// Neighbour of `node` one step along `axis` in direction `dir` (±1), if on the grid.
    pub fn neighbor(&self, node: usize, axis: usize, dir: isize) -> Option<usize> {
        let i = self.multi_index(node)[axis] as isize + dir;
        if i < 0 || i >= self.dims[axis] as isize {
            None
        } else if dir > 0 {
            Some(node + self.strides[axis])
        } else {
            Some(node - self.strides[axis])
        }
    }

    /// Node index nearest to `x`, clamped to the grid.
    pub fn nearest_node(&self, x: &[f64]) -> usize {
        let mut idx = [0usize; 3];
        for d in 0..self.n {
            let t = ((x[d] - self.lo[d]) / self.h).round();
            idx[d] = t.clamp(0.0, (self.dims[d] - 1) as f64) as usize;
        }
        self.node_at(&idx)
    }

    /// Half the diagonal of a grid cell.
    pub fn cell_radius(&self) -> f64 {
        0.5 * self.h * (self.n as f64).sqrt()
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.n as i32)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainKind {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// Signed distance sampled at the grid nodes of the bounding box
    /// (negative inside); interpolated multilinearly in between.
    Samples { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(rename = "shape")]
    pub kind: DomainKind,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Interior,
    Boundary,
    Exterior,
}

impl NodeClass {
    pub fn name(self) -> &'static str {
        match self {
            NodeClass::Interior => "interior",
            NodeClass::Boundary => "boundary",
            NodeClass::Exterior => "exterior",
        }
    }
}

/// A classified grid.
///
/// Interior nodes lie strictly inside `Ω` with all `2n` axis neighbours on the
/// grid. Boundary nodes are the remaining nodes adjacent to an interior node;
/// they sit on or just outside `∂Ω` (within one cell) and carry the Dirichlet
/// data. Exterior nodes are never read.
#[derive(Debug, Clone)]
pub struct Domain {
    pub grid: Grid,
    pub kind: DomainKind,
    class: Vec<NodeClass>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    active: Vec<usize>,
    interior_ordinal: Vec<u32>,
    normals: Vec<Point>,
}

const NOT_INTERIOR: u32 = u32::MAX;

pub fn build_domain(spec: &DomainSpec) -> Result<Domain> {
    let n = spec.lo.len();
    if !(n == 2 || n == 3) || spec.hi.len() != n {
        return Err(Error::InvalidDomain(format!(
            "bounding box must have 2 or 3 matching coordinates, got {} and {}",
            spec.lo.len(),
            spec.hi.len()
        )));
    }
    if !(spec.h > 0.0) || !spec.h.is_finite() {
        return Err(Error::InvalidDomain(format!("grid spacing h = {} must be positive", spec.h)));
    }
    for d in 0..n {
        if !(spec.hi[d] > spec.lo[d]) {
            return Err(Error::InvalidDomain(format!("degenerate bounding box along axis {d}")));
        }
    }
    let dims: Vec<usize> = (0..n)
        .map(|d| ((spec.hi[d] - spec.lo[d]) / spec.h + 1e-9).floor() as usize + 1)
        .collect();
    let mut strides = vec![1; n];
    for d in (0..n - 1).rev() {
        strides[d] = strides[d + 1] * dims[d + 1];
    }
    let grid = Grid {
        n,
        dims,
        strides,
        h: spec.h,
        lo: spec.lo.clone(),
        hi: spec.hi.clone(),
    };
    match &spec.kind {
        DomainKind::Box { lo, hi } if lo.len() != n || hi.len() != n => {
            return Err(Error::InvalidDomain("box corners must match the grid dimension".into()))
        }
        DomainKind::Ball { center, radius } if center.len() != n || !(*radius > 0.0) => {
            return Err(Error::InvalidDomain("ball needs an n-dimensional center and radius > 0".into()))
        }
        DomainKind::Samples { values } if values.len() != grid.len() => {
            return Err(Error::InvalidDomain(format!(
                "{} signed-distance samples for {} grid nodes",
                values.len(),
                grid.len()
            )))
        }
        _ => {}
    }
    Domain::classify(grid, spec.kind.clone())
}

impl Domain {
    fn classify(grid: Grid, kind: DomainKind) -> Result<Domain> {
        let len = grid.len();
        let n = grid.n;
        let tol = 1e-9 * grid.h;
        let probe = Domain {
            grid: grid.clone(),
            kind: kind.clone(),
            class: Vec::new(),
            interior: Vec::new(),
            boundary: Vec::new(),
            active: Vec::new(),
            interior_ordinal: Vec::new(),
            normals: Vec::new(),
        };
        let strictly_inside: Vec<bool> = (0..len)
            .map(|p| probe.signed_distance(&grid.position(p)) < -tol)
            .collect();
        let mut class = vec![NodeClass::Exterior; len];
        for p in 0..len {
            let on_grid = (0..n).all(|d| [-1, 1].iter().all(|&s| grid.neighbor(p, d, s).is_some()));
            if strictly_inside[p] && on_grid {
                class[p] = NodeClass::Interior;
            }
        }
        let mut boundary = Vec::new();
        for p in 0..len {
            if class[p] == NodeClass::Interior {
                continue;
            }
            let touches = (0..n).any(|d| {
                [-1, 1].iter().any(|&s| {
                    grid.neighbor(p, d, s)
                        .is_some_and(|q| class[q] == NodeClass::Interior)
                })
            });
            if touches {
                boundary.push(p);
            }
        }
        for &p in &boundary {
            class[p] = NodeClass::Boundary;
        }
        let interior: Vec<usize> = (0..len).filter(|&p| class[p] == NodeClass::Interior).collect();
        for d in 0..n {
            let mut seen = vec![false; grid.dims[d]];
            for &p in &interior {
                seen[grid.multi_index(p)[d]] = true;
            }
            let count = seen.iter().filter(|&&s| s).count();
            if count < 3 {
                return Err(Error::InvalidDomain(format!(
                    "only {count} interior node layers along axis {d}; need at least 3"
                )));
            }
        }
        let mut interior_ordinal = vec![NOT_INTERIOR; len];
        for (i, &p) in interior.iter().enumerate() {
            interior_ordinal[p] = i as u32;
        }
        let active: Vec<usize> = (0..len).filter(|&p| class[p] != NodeClass::Exterior).collect();
        let mut dom = Domain {
            class,
            interior,
            boundary,
            active,
            interior_ordinal,
            ..probe
        };
        dom.normals = dom.boundary.iter().map(|&p| dom.outward_normal(p)).collect();
        Ok(dom)
    }

    /// Signed distance to `∂Ω` (negative inside).
    pub fn signed_distance(&self, x: &Point) -> f64 {
        let n = self.grid.n;
        match &self.kind {
            DomainKind::Ball { center, radius } => {
                (0..n).map(|d| (x[d] - center[d]).powi(2)).sum::<f64>().sqrt() - radius
            }
            DomainKind::Box { lo, hi } => {
                let mut outside = 0.0;
                let mut inside = f64::NEG_INFINITY;
                for d in 0..n {
                    let mid = 0.5 * (lo[d] + hi[d]);
                    let q = (x[d] - mid).abs() - 0.5 * (hi[d] - lo[d]);
                    outside += q.max(0.0).powi(2);
                    inside = inside.max(q);
                }
                outside.sqrt() + inside.min(0.0)
            }
            DomainKind::Samples { values } => {
                let g = &self.grid;
                let mut base = [0usize; 3];
                let mut frac = [0.0; 3];
                for d in 0..n {
                    let t = (x[d] - g.lo[d]) / g.h;
                    if t < -1e-9 || t > (g.dims[d] - 1) as f64 + 1e-9 {
                        return g.h;
                    }
                    let i = (t.floor().max(0.0) as usize).min(g.dims[d] - 2);
                    base[d] = i;
                    frac[d] = (t - i as f64).clamp(0.0, 1.0);
                }
                let mut acc = 0.0;
                for corner in 0..(1usize << n) {
                    let mut w = 1.0;
                    let mut idx = base;
                    for d in 0..n {
                        if corner >> d & 1 == 1 {
                            idx[d] += 1;
                            w *= frac[d];
                        } else {
                            w *= 1.0 - frac[d];
                        }
                    }
                    if w != 0.0 {
                        acc += w * values[g.node_at(&idx)];
                    }
                }
                acc
            }
        }
    }

    fn outward_normal(&self, p: usize) -> Point {
        let n = self.grid.n;
        let x = self.grid.position(p);
        let s = 0.5 * self.grid.h;
        let mut g = [0.0; 3];
        for d in 0..n {
            let mut xp = x;
            let mut xm = x;
            xp[d] += s;
            xm[d] -= s;
            g[d] = (self.signed_distance(&xp) - self.signed_distance(&xm)) / (2.0 * s);
        }
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            g.iter_mut().for_each(|v| *v /= norm);
            return g;
        }
        // flat signed distance: point away from the interior neighbours
        let mut v = [0.0; 3];
        for d in 0..n {
            for s in [-1isize, 1] {
                if self.grid.neighbor(p, d, s).is_some_and(|q| self.class[q] == NodeClass::Interior) {
                    v[d] -= s as f64;
                }
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|a| *a /= norm);
            v
        } else {
            let mut e = [0.0; 3];
            e[0] = 1.0;
            e
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn h(&self) -> f64 {
        self.grid.h
    }

    pub fn class(&self, node: usize) -> NodeClass {
        self.class[node]
    }

    pub fn is_active(&self, node: usize) -> bool {
        self.class[node] != NodeClass::Exterior
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Interior and boundary nodes, in index order.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn interior_ordinal(&self, node: usize) -> Option<usize> {
        let o = self.interior_ordinal[node];
        (o != NOT_INTERIOR).then_some(o as usize)
    }

    /// Outward unit normal at the `i`-th boundary node.
    pub fn boundary_normal(&self, i: usize) -> Point {
        self.normals[i]
    }

    pub fn normal_at(&self, node: usize) -> Option<Point> {
        self.boundary.binary_search(&node).ok().map(|i| self.normals[i])
    }

    /// Approximate `H^{n−1}(∂Ω ∩ B_ρ(x0))` from boundary-node areas `h^{n−1}/‖ν‖_∞`.
    pub fn boundary_area_in_ball(&self, x0: &Point, rho: f64) -> f64 {
        let hn1 = self.grid.h.powi(self.grid.n as i32 - 1);
        self.boundary
            .iter()
            .zip(&self.normals)
            .filter(|(&p, _)| dist(&self.grid.position(p), x0) <= rho)
            .map(|(_, nu)| hn1 / nu.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .sum()
    }

    /// Foot point `x − s(x) ν(x)` of the `i`-th boundary node on `∂Ω`.
    pub fn boundary_foot(&self, i: usize) -> Point {
        let x = self.grid.position(self.boundary[i]);
        let s = self.signed_distance(&x);
        let nu = self.normals[i];
        [x[0] - s * nu[0], x[1] - s * nu[1], x[2] - s * nu[2]]
    }

    /// Smallest `C ≥ 0` with `(x − x0)·ν(x) ≥ −C |x − x0|²` over pairs of
    /// boundary foot points at least `2h` apart, `x0` running over up to
    /// `max_refs` evenly spaced boundary nodes.
    pub fn measured_curvature_bound(&self, max_refs: usize) -> f64 {
        let b = self.boundary.len();
        if b == 0 {
            return 0.0;
        }
        let feet: Vec<Point> = (0..b).map(|i| self.boundary_foot(i)).collect();
        let min_r2 = (2.0 * self.grid.h).powi(2);
        let step = (b / max_refs.max(1)).max(1);
        let mut c = 0.0f64;
        for x0 in feet.iter().step_by(step) {
            for (x, nu) in feet.iter().zip(&self.normals) {
                let r2: f64 = (0..3).map(|d| (x[d] - x0[d]).powi(2)).sum();
                if r2 < min_r2 {
                    continue;
                }
                let dot: f64 = (0..3).map(|d| (x[d] - x0[d]) * nu[d]).sum();
                c = c.max(-dot / r2);
            }
        }
        c
    }
}

pub(crate) fn dist(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_ball(h: f64) -> Domain {
        build_domain(&DomainSpec {
            kind: DomainKind::Ball {
                center: vec![0.0; 3],
                radius: 1.0,
            },
            lo: vec![-1.0; 3],
            hi: vec![1.0; 3],
            h,
        })
        .unwrap()
    }

    #[test]
    fn interior_nodes_have_active_neighbours() {
        let d = unit_ball(0.125);
        for &p in d.interior() {
            for a in 0..3 {
                for s in [-1, 1] {
                    let q = d.grid.neighbor(p, a, s).unwrap();
                    assert!(d.is_active(q));
                }
            }
        }
    }

    #[test]
    fn ball_volume_count() {
        let h = 1.0 / 16.0;
        let d = unit_ball(h);
        let expect = 4.0 * std::f64::consts::PI / 3.0 / h.powi(3);
        let got = d.interior().len() as f64;
        assert!((got - expect).abs() / expect < 0.02, "{got} vs {expect}");
    }

    #[test]
    fn unit_normals() {
        let d = unit_ball(0.1);
        for i in 0..d.boundary().len() {
            let nu = d.boundary_normal(i);
            let len = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((len - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn box_face_normals_are_axes() {
        let d = build_domain(&DomainSpec {
            kind: DomainKind::Box {
                lo: vec![0.0, 0.0],
                hi: vec![1.0, 1.0],
            },
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
            h: 0.1,
        })
        .unwrap();
        let close = |a: Point, b: Point| (0..3).all(|i| (a[i] - b[i]).abs() < 1e-10);
        let p = d.grid.node_at(&[0, 4]);
        assert!(close(d.normal_at(p).unwrap(), [-1.0, 0.0, 0.0]));
        let p = d.grid.node_at(&[4, 10]);
        assert!(close(d.normal_at(p).unwrap(), [0.0, 1.0, 0.0]));
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = DomainSpec {
            kind: DomainKind::Box {
                lo: vec![0.0, 0.0],
                hi: vec![1.0, 1.0],
            },
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
            h: 0.0,
        };
        assert!(build_domain(&spec).is_err());
        spec.h = 0.4;
        assert!(build_domain(&spec).is_err(), "too few interior layers");
        spec.h = 0.25;
        assert!(build_domain(&spec).is_ok());
    }

    #[test]
    fn convex_ball_has_no_curvature_penalty() {
        let d = unit_ball(0.125);
        assert!(d.measured_curvature_bound(64) < 0.1);
    }
}
