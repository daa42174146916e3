//! Convex hull of a planar set and the `ε`-strip along its boundary.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{dist, Epsilon, PointSet};
use crate::hull::{cross, hull_indices};

/// Strictly convex hull, counterclockwise. Collinear input yields the two
/// segment endpoints and coincident input a single vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexHull {
    vertices: Vec<[f64; 2]>,
    /// Index of each vertex in the input set.
    indices: Vec<usize>,
}

impl ConvexHull {
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let h = self.vertices.len();
        let count = match h {
            0 | 1 => 0,
            2 => 1,
            _ => h,
        };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % h]))
    }

    /// Distance from `p` to the hull boundary (edges and vertices).
    pub fn boundary_distance(&self, p: [f64; 2]) -> f64 {
        self.boundary_distance_within(p, 0.0)
    }

    /// Like [`Self::boundary_distance`] but stops at the first edge within
    /// `stop` of `p` and returns that edge's distance.
    fn boundary_distance_within(&self, p: [f64; 2], stop: f64) -> f64 {
        if self.vertices.len() == 1 {
            return dist(&p, &self.vertices[0]);
        }
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            let d = segment_distance(p, a, b);
            if d < best {
                best = d;
                if best <= stop {
                    break;
                }
            }
        }
        best
    }

    /// Whether `p` lies inside or on the hull, with absolute slack `tol`.
    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        match self.vertices.len() {
            0 => false,
            1 | 2 => self.boundary_distance(p) <= tol,
            _ => self.edges().all(|(a, b)| {
                let len = dist(&a, &b);
                cross(a, b, p) >= -tol * len
            }),
        }
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(&p, &a);
    }
    let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0);
    dist(&p, &[a[0] + t * ab[0], a[1] + t * ab[1]])
}

fn require_planar(ps: &PointSet) -> Result<Vec<[f64; 2]>> {
    ps.as_2d().ok_or_else(|| {
        invalid(format!(
            "the certificate pipeline is planar; got d = {}",
            ps.dim()
        ))
    })
}

pub fn convex_hull(ps: &PointSet) -> Result<ConvexHull> {
    let pts = require_planar(ps)?;
    let indices = hull_indices(&pts);
    Ok(ConvexHull {
        vertices: indices.iter().map(|&i| pts[i]).collect(),
        indices,
    })
}

/// Result of discarding points farther than `ε` from the hull boundary.
#[derive(Clone, Debug)]
pub struct BoundaryStrip {
    pub points: PointSet,
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
}

/// Keeps exactly the points within distance `ε` of the hull boundary.
///
/// A point deeper than `ε` inside a convex set of diameter at most 1 is at
/// distance `< 1 − ε` from every point of the set, so dropping it cannot
/// change the antipode count.
pub fn filter_boundary_strip(
    ps: &PointSet,
    hull: &ConvexHull,
    eps: Epsilon,
) -> Result<BoundaryStrip> {
    let pts = require_planar(ps)?;
    let e = eps.value();
    let mut on_hull = vec![false; pts.len()];
    for &i in hull.indices() {
        on_hull[i] = true;
    }
    let keep: Vec<bool> = pts
        .par_iter()
        .zip(on_hull.par_iter())
        .map(|(&p, &v)| v || hull.boundary_distance_within(p, e) <= e)
        .collect();
    let (kept, removed): (Vec<usize>, Vec<usize>) = (0..pts.len()).partition(|&i| keep[i]);
    let strip = BoundaryStrip {
        points: ps.subset(&kept)?,
        kept,
        removed,
    };
    if cfg!(debug_assertions) && strip.removed.len().saturating_mul(ps.len()) <= 20_000_000 {
        verify_filter_soundness(ps, &strip, eps)?;
    }
    Ok(strip)
}

/// Checks by brute force that no removed point has a partner at distance
/// `≥ 1 − ε`.
pub fn verify_filter_soundness(ps: &PointSet, strip: &BoundaryStrip, eps: Epsilon) -> Result<()> {
    let far = eps.far();
    let bad = strip.removed.par_iter().find_any(|&&i| {
        let p = ps.point(i);
        ps.points().any(|q| dist(p, q) >= far)
    });
    match bad {
        Some(&i) => Err(Error::Contract(format!(
            "filtered point {i} has an antipodal partner"
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_circle, gen_random_disk};

    #[test]
    fn square_with_center() {
        let ps = PointSet::from_2d(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]])
            .unwrap();
        let h = convex_hull(&ps).unwrap();
        assert_eq!(h.len(), 4);
        assert!(!h.indices().contains(&4));
        assert!((h.boundary_distance([0.5, 0.5]) - 0.5).abs() < 1e-15);
        assert!(h.contains([0.5, 0.5], 0.0));
        assert!(!h.contains([1.5, 0.5], 1e-12));
    }

    #[test]
    fn circle_points_all_on_hull() {
        let ps = gen_circle(100).unwrap();
        assert_eq!(convex_hull(&ps).unwrap().len(), 100);
        let e = Epsilon::new(0.01).unwrap();
        let s = filter_boundary_strip(&ps, &convex_hull(&ps).unwrap(), e).unwrap();
        assert!(s.removed.is_empty());
    }

    #[test]
    fn collinear_set_keeps_everything() {
        let pts: Vec<[f64; 2]> = (0..20)
            .map(|i| [i as f64 / 20.0, 0.5 * i as f64 / 20.0])
            .collect();
        let ps = PointSet::from_2d(&pts).unwrap();
        let h = convex_hull(&ps).unwrap();
        assert_eq!(h.len(), 2);
        let s = filter_boundary_strip(&ps, &h, Epsilon::new(0.01).unwrap()).unwrap();
        assert_eq!(s.kept.len(), 20);
    }

    #[test]
    fn rejects_non_planar() {
        let ps = PointSet::new(3, vec![0.0; 9]).unwrap();
        assert!(convex_hull(&ps).is_err());
    }

    #[test]
    fn filled_disk_strip_fraction() {
        let ps = gen_random_disk(100_000, 4).unwrap();
        let e = Epsilon::dyadic(4).unwrap();
        let h = convex_hull(&ps).unwrap();
        let s = filter_boundary_strip(&ps, &h, e).unwrap();
        let frac = s.removed.len() as f64 / ps.len() as f64;
        let area = (1.0 - 2.0 * e.value()).powi(2);
        assert!((frac / area - 1.0).abs() <= 0.2, "{frac} vs {area}");
        for &i in &s.kept {
            let p = ps.point(i);
            assert!(h.boundary_distance([p[0], p[1]]) <= e.value());
        }
    }

    #[test]
    fn removed_points_have_no_antipodes() {
        for seed in 0..5 {
            let ps = gen_random_disk(2000, seed).unwrap();
            let e = Epsilon::dyadic(5).unwrap();
            let s = filter_boundary_strip(&ps, &convex_hull(&ps).unwrap(), e).unwrap();
            assert!(!s.removed.is_empty());
            verify_filter_soundness(&ps, &s, e).unwrap();
        }
    }
}
