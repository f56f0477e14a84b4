use crate::discretization::{DomainKind, DomainSpec, Point};

/// Profile centers: the middle of the domain with points halfway out along the
/// axes and diagonals. One more point per axis direction sits on the boundary.
pub fn auto_centers(spec: &DomainSpec) -> Vec<Point> {
    let n = spec.lo.len();
    let (center, half): (Vec<f64>, Vec<f64>) = match &spec.kind {
        DomainKind::Ball { center, radius } => (center.clone(), vec![*radius; n]),
        DomainKind::Box { lo, hi } => (
            lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect(),
            lo.iter().zip(hi).map(|(a, b)| 0.5 * (b - a)).collect(),
        ),
        DomainKind::Samples { .. } => (
            spec.lo.iter().zip(&spec.hi).map(|(a, b)| 0.5 * (a + b)).collect(),
            spec.lo.iter().zip(&spec.hi).map(|(a, b)| 0.5 * (b - a)).collect(),
        ),
    };
    let at = |offset: &[f64]| {
        let mut p = [0.0; 3];
        for d in 0..n {
            p[d] = center[d] + offset[d] * half[d];
        }
        p
    };
    let mut out = vec![at(&[0.0; 3])];
    for scale in [0.5, 1.0] {
        for d in 0..n {
            for s in [1.0, -1.0] {
                let mut o = [0.0; 3];
                o[d] = s * scale;
                out.push(at(&o));
            }
        }
        if scale == 0.5 {
            // corners of the cube {±1}ⁿ scaled onto the sphere of radius 1/2
            let r = 0.5 / (n as f64).sqrt();
            for mask in 0..(1usize << n) {
                let mut o = [0.0; 3];
                for (d, v) in o.iter_mut().enumerate().take(n) {
                    *v = if mask >> d & 1 == 1 { -r } else { r };
                }
                out.push(at(&o));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_gets_twenty_one_centers_six_on_the_sphere() {
        let spec = DomainSpec {
            kind: DomainKind::Ball {
                center: vec![0.0; 3],
                radius: 1.0,
            },
            lo: vec![-1.0; 3],
            hi: vec![1.0; 3],
            h: 0.1,
        };
        let c = auto_centers(&spec);
        assert_eq!(c.len(), 21);
        let on_sphere = c
            .iter()
            .filter(|p| ((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() - 1.0).abs() < 1e-15)
            .count();
        assert_eq!(on_sphere, 6);
    }
}
