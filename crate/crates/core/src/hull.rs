//! Planar convex hull (Andrew's monotone chain) and the rotating-calipers
//! diameter built on top of it.

use crate::geometry::dist;

/// Twice the signed area of the triangle `o, a, b`; positive when `o → a → b`
/// turns counterclockwise.
#[inline]
pub fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the strictly convex hull of `pts`, counterclockwise, starting at
/// the lexicographically smallest point.
///
/// Collinear boundary points are dropped. Degenerate inputs are returned as
/// the distinct extreme points: one index when all points coincide, two when
/// the set is collinear.
pub fn hull_indices(pts: &[[f64; 2]]) -> Vec<usize> {
    if pts.is_empty() {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then(pts[a][1].total_cmp(&pts[b][1]))
    });
    order.dedup_by(|a, b| pts[*a] == pts[*b]);
    if order.len() <= 2 {
        return order;
    }

    let mut lower: Vec<usize> = Vec::with_capacity(order.len());
    for &i in &order {
        while lower.len() >= 2
            && cross(
                pts[lower[lower.len() - 2]],
                pts[lower[lower.len() - 1]],
                pts[i],
            ) <= 0.0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(order.len());
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && cross(
                pts[upper[upper.len() - 2]],
                pts[upper[upper.len() - 1]],
                pts[i],
            ) <= 0.0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Diameter of a convex polygon given as counterclockwise vertices.
///
/// Rotating calipers over antipodal vertex pairs. Each candidate pair is
/// measured with the same distance routine used everywhere else, so the
/// result is the same float a brute-force scan would produce.
pub fn calipers_diameter(hull: &[[f64; 2]]) -> f64 {
    let h = hull.len();
    match h {
        0 | 1 => return 0.0,
        2 => return dist(&hull[0], &hull[1]),
        _ => {}
    }
    let mut best = 0.0f64;
    let mut j = 1usize;
    for i in 0..h {
        let ni = (i + 1) % h;
        let mut steps = 0;
        while steps < h
            && cross(hull[i], hull[ni], hull[(j + 1) % h]).abs()
                > cross(hull[i], hull[ni], hull[j]).abs()
        {
            j = (j + 1) % h;
            steps += 1;
        }
        let nj = (j + 1) % h;
        for (a, b) in [(i, j), (ni, j), (i, nj), (ni, nj)] {
            let d = dist(&hull[a], &hull[b]);
            if d > best {
                best = d;
            }
        }
    }
    best
}
