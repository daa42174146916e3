//! The box graph of the antipodality matrix: common-neighbour profiles,
//! edge growth, and the two-annuli lens that controls common neighbours.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::Epsilon;
use crate::pipeline::{AntipodalityMatrix, BoxPartition};
use crate::stats::{least_squares, LineFit};

/// Boxes as vertices, antipodal box pairs as edges. Box positions are kept
/// so that geometric exclusion zones can be formed.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxGraph {
    cell_side: f64,
    keys: Vec<[i64; 2]>,
    adj: Vec<Vec<u32>>,
}

impl BoxGraph {
    pub fn new(
        cell_side: f64,
        keys: Vec<[i64; 2]>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if !(cell_side.is_finite() && cell_side > 0.0) {
            return Err(invalid(format!(
                "cell side must be positive, got {cell_side}"
            )));
        }
        let k = keys.len();
        let mut adj = vec![Vec::new(); k];
        for (i, j) in edges {
            if i >= k || j >= k {
                return Err(invalid(format!("edge ({i}, {j}) outside 0..{k}")));
            }
            if i != j {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
        for r in &mut adj {
            r.sort_unstable();
            r.dedup();
        }
        Ok(BoxGraph {
            cell_side,
            keys,
            adj,
        })
    }

    pub fn from_matrix(bp: &BoxPartition, m: &AntipodalityMatrix) -> Self {
        Self::new(bp.cell_side(), bp.keys().to_vec(), m.edges()).expect("matrix matches partition")
    }

    pub fn k(&self) -> usize {
        self.keys.len()
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    pub fn keys(&self) -> &[[i64; 2]] {
        &self.keys
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    /// `|E|`, unordered and loop-free.
    pub fn edge_count(&self) -> u64 {
        self.adj.iter().map(|r| r.len() as u64).sum::<u64>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .map(move |&j| (i, j as usize))
                .filter(|&(i, j)| i < j)
        })
    }

    fn center(&self, v: usize) -> [f64; 2] {
        let [x, y] = self.keys[v];
        [
            (x as f64 + 0.5) * self.cell_side,
            (y as f64 + 0.5) * self.cell_side,
        ]
    }
}

/// Exclusion radius used by default: `10√ε`.
pub fn default_forbidden_radius(eps: Epsilon) -> f64 {
    10.0 * eps.value().sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub s: u64,
    /// `max_v |{w ∉ N_v : |N(v) ∩ N(w)| ≥ s}|`.
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommonNeighborProfile {
    pub k: u64,
    pub edges: u64,
    pub forbidden_radius: f64,
    pub rows: Vec<ProfileRow>,
    /// `max_s s·count_s / k`.
    pub c_emp: f64,
    /// `max_v |N_v|`, where `N_v` holds the boxes within the forbidden
    /// radius of `v` (including `v`).
    pub max_forbidden: u64,
    /// `max_v |N_v| / √k`.
    pub forbidden_ratio: f64,
}

/// Tabulates the common-neighbour profile for `s = 1, 2, 4, …, ≤ k`.
/// Box centres within `forbidden_radius` of `v` are excluded from the count
/// for `v`.
pub fn common_neighbor_profile(
    g: &BoxGraph,
    forbidden_radius: f64,
) -> Result<CommonNeighborProfile> {
    if !(forbidden_radius >= 0.0 && forbidden_radius.is_finite()) {
        return Err(invalid(format!("bad forbidden radius {forbidden_radius}")));
    }
    let k = g.k();
    let mut thresholds = Vec::new();
    let mut s = 1u64;
    while s <= k.max(1) as u64 {
        thresholds.push(s);
        s *= 2;
    }
    let r2 = forbidden_radius * forbidden_radius;
    let centers: Vec<[f64; 2]> = (0..k).map(|v| g.center(v)).collect();

    let (counts, max_forbidden) = (0..k)
        .into_par_iter()
        .map_init(
            || (vec![0u32; k], Vec::new()),
            |(common, touched), v| {
                let c = centers[v];
                let forbidden = |w: usize| {
                    let dx = centers[w][0] - c[0];
                    let dy = centers[w][1] - c[1];
                    dx * dx + dy * dy <= r2
                };
                let n_forbidden = (0..k).filter(|&w| forbidden(w)).count() as u64;
                for &u in g.neighbors(v) {
                    for &w in g.neighbors(u as usize) {
                        if common[w as usize] == 0 {
                            touched.push(w);
                        }
                        common[w as usize] += 1;
                    }
                }
                let mut per_s = vec![0u64; thresholds.len()];
                for &w in touched.iter() {
                    let w = w as usize;
                    let m = common[w] as u64;
                    common[w] = 0;
                    if forbidden(w) {
                        continue;
                    }
                    for (slot, &s) in per_s.iter_mut().zip(&thresholds) {
                        if m >= s {
                            *slot += 1;
                        }
                    }
                }
                touched.clear();
                (per_s, n_forbidden)
            },
        )
        .reduce(
            || (vec![0u64; thresholds.len()], 0),
            |(a, fa), (b, fb)| {
                let m = a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect();
                (m, fa.max(fb))
            },
        );

    let rows: Vec<ProfileRow> = thresholds
        .iter()
        .zip(&counts)
        .map(|(&s, &count)| ProfileRow { s, count })
        .collect();
    let kf = k.max(1) as f64;
    let c_emp = rows
        .iter()
        .map(|r| (r.s * r.count) as f64 / kf)
        .fold(0.0, f64::max);
    Ok(CommonNeighborProfile {
        k: k as u64,
        edges: g.edge_count(),
        forbidden_radius,
        rows,
        c_emp,
        max_forbidden,
        forbidden_ratio: max_forbidden as f64 / kf.sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeGrowth {
    pub points: usize,
    /// Plain fit of `ln|E|` against `ln k`.
    pub fit: LineFit,
    /// Fit of `ln|E| − ½·ln ln k` against `ln k`.
    pub log_adjusted: LineFit,
}

/// Fits the growth exponent of `|E|` in `k` from `(k, |E|)` samples.
pub fn edge_growth_check(samples: &[(u64, u64)]) -> Result<EdgeGrowth> {
    if samples.len() < 4 {
        return Err(invalid(format!(
            "edge growth needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    let mut ks: Vec<u64> = samples.iter().map(|s| s.0).collect();
    ks.sort_unstable();
    ks.dedup();
    if ks.len() != samples.len() {
        return Err(invalid("edge growth samples need distinct k"));
    }
    if let Some(&(k, e)) = samples.iter().find(|&&(k, e)| k < 2 || e == 0) {
        return Err(invalid(format!("unusable sample k = {k}, |E| = {e}")));
    }
    let xs: Vec<f64> = samples.iter().map(|s| (s.0 as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| (s.1 as f64).ln()).collect();
    let adj: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - 0.5 * x.ln()).collect();
    Ok(EdgeGrowth {
        points: samples.len(),
        fit: least_squares(&xs, &ys)?,
        log_adjusted: least_squares(&xs, &adj)?,
    })
}

/// The region at distance `[1 − ε, 1]` from both anchors `(∓d/2, 0)`,
/// upper component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LensGeometry {
    pub d: f64,
    pub epsilon: f64,
    /// Top corner, where the two outer circles meet on the y-axis.
    pub y_outer: f64,
    /// Bottom corner, where the two inner circles meet.
    pub y_inner: f64,
    /// `|x|` of the side corners, where an outer circle meets an inner one.
    pub x_side: f64,
    pub y_side: f64,
    /// Distance between the two side corners.
    pub side_width: f64,
    /// Number of `ε/4` boxes that can meet the bounding box of the lens.
    pub cover_count: u64,
    /// `d ≥ 10√ε`.
    pub proof_regime: bool,
}

/// The lens formulas hold for any gap in `(0, 1]` with `ε` small enough
/// that the inner circles still meet; `10√ε ≤ d` is only the regime the
/// counting argument needs, reported as [`in_proof_regime`].
fn check_gap(d: f64, eps: Epsilon) -> Result<()> {
    let e = eps.value();
    if !(d > 0.0 && d <= 1.0) {
        return Err(invalid(format!("gap d = {d} outside (0, 1]")));
    }
    if d <= 1.5 * e || d >= 2.0 * (1.0 - e) {
        return Err(invalid(format!(
            "annuli for d = {d}, ε = {e} do not form a lens"
        )));
    }
    Ok(())
}

/// Whether `d ≥ 10√ε`.
pub fn in_proof_regime(d: f64, eps: Epsilon) -> bool {
    d >= 10.0 * eps.value().sqrt()
}

pub fn annuli_intersection(d: f64, eps: Epsilon) -> Result<LensGeometry> {
    check_gap(d, eps)?;
    let e = eps.value();
    let d2 = d * d;
    let y_outer = (4.0 - d2).sqrt() / 2.0;
    let y_inner = (4.0 - d2 + 4.0 * e * e - 8.0 * e).sqrt() / 2.0;
    let x_side = (2.0 * e - e * e) / (2.0 * d);
    let y_side = (-d2 * d2 + 2.0 * d2 * e * e - 4.0 * d2 * e + 4.0 * d2 - e.powi(4)
        + 4.0 * e.powi(3)
        - 4.0 * e * e)
        .sqrt()
        / (2.0 * d);
    let cell = e / 4.0;
    let cells = |len: f64| (len / cell).ceil() as u64 + 1;
    Ok(LensGeometry {
        d,
        epsilon: e,
        y_outer,
        y_inner,
        x_side,
        y_side,
        side_width: 2.0 * x_side,
        cover_count: cells(2.0 * x_side) * cells(y_outer - y_inner),
        proof_regime: in_proof_regime(d, eps),
    })
}

/// Constant `C` in the recorded cover bound `count ≤ C/d`.
pub const LENS_COVER_CONSTANT: f64 = 64.0;

/// Subdivision depth of the per-box lens test; boxes are resolved to
/// `ε/4 · 2⁻⁶`.
const LENS_RASTER_DEPTH: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LensAudit {
    pub d: f64,
    pub epsilon: f64,
    /// Origin-anchored `ε/4` boxes meeting the enlarged lens.
    pub count: u64,
    /// `count · d`.
    pub constant: f64,
    /// `count ≤ LENS_COVER_CONSTANT / d`.
    pub bound_ok: bool,
    /// Distance between the upper and the mirrored lower component.
    pub component_gap: f64,
}

fn annulus_bounds(lo: [f64; 2], hi: [f64; 2], c: [f64; 2]) -> (f64, f64) {
    let mut min2 = 0.0;
    let mut max2 = 0.0;
    for a in 0..2 {
        let near = c[a].clamp(lo[a], hi[a]) - c[a];
        let far = (lo[a] - c[a]).abs().max((hi[a] - c[a]).abs());
        min2 += near * near;
        max2 += far * far;
    }
    (min2.sqrt(), max2.sqrt())
}

/// Whether the closed box meets `{r_in ≤ |x − c| ≤ r_out}` for both centres,
/// refined by quadrisection.
fn box_meets_lens(
    lo: [f64; 2],
    hi: [f64; 2],
    centers: &[[f64; 2]; 2],
    r: (f64, f64),
    depth: u32,
) -> bool {
    let mut inside = true;
    for &c in centers {
        let (min, max) = annulus_bounds(lo, hi, c);
        if min > r.1 || max < r.0 {
            return false;
        }
        inside &= min >= r.0 && max <= r.1;
    }
    if inside || depth == 0 {
        return true;
    }
    let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    [
        (lo, mid),
        ([mid[0], lo[1]], [hi[0], mid[1]]),
        ([lo[0], mid[1]], [mid[0], hi[1]]),
        (mid, hi),
    ]
    .iter()
    .any(|&(l, h)| box_meets_lens(l, h, centers, r, depth - 1))
}

/// Counts the `ε/4` boxes meeting the upper lens after each annulus is
/// widened by `ε/4` on both sides, which accounts for moving the anchors
/// anywhere inside their boxes.
pub fn lens_cover_audit(d: f64, eps: Epsilon) -> Result<LensAudit> {
    check_gap(d, eps)?;
    let e = eps.value();
    let side = e / 4.0;
    let r_in = 1.0 - e - side;
    let r_out = 1.0 + side;
    let half = d / 2.0;
    let centers = [[-half, 0.0], [half, 0.0]];

    let y_top = (r_out * r_out - half * half).sqrt();
    let y_bottom = (r_in * r_in - half * half).sqrt();
    let x_extent = (r_out * r_out - r_in * r_in) / (2.0 * d);

    let x0 = (-x_extent / side).floor() as i64 - 1;
    let x1 = (x_extent / side).floor() as i64 + 1;
    let y0 = (y_bottom / side).floor() as i64 - 1;
    let y1 = (y_top / side).floor() as i64 + 1;
    let count = (x0..=x1)
        .into_par_iter()
        .map(|ix| {
            (y0..=y1)
                .filter(|&iy| {
                    let lo = [ix as f64 * side, iy as f64 * side];
                    let hi = [(ix + 1) as f64 * side, (iy + 1) as f64 * side];
                    box_meets_lens(lo, hi, &centers, (r_in, r_out), LENS_RASTER_DEPTH)
                })
                .count() as u64
        })
        .sum::<u64>();
    Ok(LensAudit {
        d,
        epsilon: e,
        count,
        constant: count as f64 * d,
        bound_ok: count as f64 <= LENS_COVER_CONSTANT / d,
        component_gap: 2.0 * y_bottom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_circle;
    use crate::pipeline::certify;
    use std::collections::BTreeSet;

    /// Generic circle–circle intersection; upper point first.
    fn intersect(c1: [f64; 2], r1: f64, c2: [f64; 2], r2: f64) -> [[f64; 2]; 2] {
        let dx = c2[0] - c1[0];
        let dy = c2[1] - c1[1];
        let l = (dx * dx + dy * dy).sqrt();
        let a = (r1 * r1 - r2 * r2 + l * l) / (2.0 * l);
        let h = (r1 * r1 - a * a).sqrt();
        let px = c1[0] + a * dx / l;
        let py = c1[1] + a * dy / l;
        let p = [px - h * dy / l, py + h * dx / l];
        let q = [px + h * dy / l, py - h * dx / l];
        if p[1] >= q[1] {
            [p, q]
        } else {
            [q, p]
        }
    }

    fn lens_grid() -> Vec<(f64, Epsilon)> {
        let mut out = Vec::new();
        for i in 0..10 {
            let e = 1e-4 * 100f64.powf(i as f64 / 9.0);
            let eps = Epsilon::new(e).unwrap();
            let lo = 10.0 * e.sqrt();
            for j in 0..10 {
                out.push((lo + (1.0 - lo) * j as f64 / 9.0, eps));
            }
        }
        out
    }

    #[test]
    fn lens_example_values() {
        let g = annuli_intersection(0.5, Epsilon::new(0.01).unwrap()).unwrap();
        assert!((g.y_outer - 3.75f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((g.y_outer - 0.968246).abs() < 1e-6);
        assert!((g.x_side - 0.0199).abs() < 1e-15);
    }

    #[test]
    fn formulas_match_numeric_oracle() {
        for (d, eps) in lens_grid() {
            let e = eps.value();
            let g = annuli_intersection(d, eps).unwrap();
            let a = [-d / 2.0, 0.0];
            let b = [d / 2.0, 0.0];
            let top = intersect(a, 1.0, b, 1.0)[0];
            let bottom = intersect(a, 1.0 - e, b, 1.0 - e)[0];
            let side = intersect(a, 1.0, b, 1.0 - e)[0];
            assert!(top[0].abs() < 1e-9 && (top[1] - g.y_outer).abs() < 1e-9);
            assert!(bottom[0].abs() < 1e-9 && (bottom[1] - g.y_inner).abs() < 1e-9);
            assert!((side[0] - g.x_side).abs() < 1e-9, "{d} {e}");
            assert!((side[1] - g.y_side).abs() < 1e-9, "{d} {e}");
            let mirror = intersect(b, 1.0, a, 1.0 - e)[0];
            assert!((mirror[0] + g.x_side).abs() < 1e-9);

            let height = g.y_outer - g.y_inner;
            assert!(height >= e / 2.0 && height <= 2.0 * e);
            assert!(g.side_width <= 4.0 * e / d);
        }
    }

    #[test]
    fn lens_collapses_as_eps_shrinks() {
        let mut prev = f64::INFINITY;
        for p in 8..30 {
            let e = Epsilon::dyadic(p).unwrap();
            let g = annuli_intersection(0.5, e).unwrap();
            let h = g.y_outer - g.y_inner;
            assert!(h < prev);
            prev = h;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn gap_out_of_range() {
        let e = Epsilon::new(0.01).unwrap();
        assert!(annuli_intersection(0.99, e).is_ok());
        assert!(annuli_intersection(0.0, e).is_err());
        assert!(annuli_intersection(1.01, e).is_err());
        assert!(!in_proof_regime(0.5, e) && in_proof_regime(1.0, e));
        assert!(lens_cover_audit(f64::NAN, e).is_err());
    }

    #[test]
    fn cover_audit_example() {
        let e = Epsilon::dyadic(8).unwrap();
        let a = lens_cover_audit(0.9, e).unwrap();
        assert!(a.count > 0);
        assert!(a.count as f64 <= 64.0 / 0.9, "{a:?}");
        assert!(a.bound_ok);
    }

    #[test]
    fn cover_audit_against_point_sampling() {
        // every box holding a sampled lens point must be counted
        let e = Epsilon::dyadic(8).unwrap();
        let d = 0.8;
        let side = e.value() / 4.0;
        let (r_in, r_out) = (1.0 - 1.25 * e.value(), 1.0 + 0.25 * e.value());
        let mut hit = BTreeSet::new();
        let steps = 2000;
        let g = annuli_intersection(d, e).unwrap();
        for i in 0..=steps {
            for j in 0..=steps {
                let x = -2.0 * g.x_side + 4.0 * g.x_side * i as f64 / steps as f64;
                let y = g.y_inner - 2.0 * e.value() + 4.0 * e.value() * j as f64 / steps as f64;
                let da = ((x + d / 2.0).powi(2) + y * y).sqrt();
                let db = ((x - d / 2.0).powi(2) + y * y).sqrt();
                if da >= r_in && da <= r_out && db >= r_in && db <= r_out {
                    hit.insert(((x / side).floor() as i64, (y / side).floor() as i64));
                }
            }
        }
        let a = lens_cover_audit(d, e).unwrap();
        assert!(hit.len() as u64 <= a.count);
        assert!(
            a.count as f64 <= 1.5 * hit.len() as f64 + 10.0,
            "{} vs {}",
            a.count,
            hit.len()
        );
    }

    #[test]
    fn cover_count_shrinks_with_gap() {
        let e = Epsilon::dyadic(12).unwrap();
        let lo = 10.0 * e.value().sqrt();
        let ds: Vec<f64> = (0..8)
            .map(|i| lo * 2f64.powf(i as f64 * 0.5))
            .filter(|&d| d <= 1.0)
            .collect();
        let counts: Vec<u64> = ds
            .iter()
            .map(|&d| lens_cover_audit(d, e).unwrap().count)
            .collect();
        for w in counts.windows(2) {
            assert!(w[1] <= w[0], "{counts:?} over {ds:?}");
        }
    }

    #[test]
    fn single_component_near_unit_gap() {
        let e = Epsilon::dyadic(10).unwrap();
        let a = lens_cover_audit(1.0, e).unwrap();
        assert!(a.component_gap > 1.7);
        assert!(a.count > 0 && a.bound_ok);
    }

    fn brute_profile(g: &BoxGraph, radius: f64) -> Vec<u64> {
        let k = g.k();
        let sets: Vec<BTreeSet<u32>> = (0..k)
            .map(|v| g.neighbors(v).iter().copied().collect())
            .collect();
        let mut out = Vec::new();
        let mut s = 1;
        while s <= k {
            let mut best = 0;
            for v in 0..k {
                let cv = g.center(v);
                let mut c = 0;
                for w in 0..k {
                    let cw = g.center(w);
                    if ((cw[0] - cv[0]).powi(2) + (cw[1] - cv[1]).powi(2)).sqrt() <= radius {
                        continue;
                    }
                    if sets[v].intersection(&sets[w]).count() >= s {
                        c += 1;
                    }
                }
                best = best.max(c);
            }
            out.push(best);
            s *= 2;
        }
        out
    }

    #[test]
    fn edgeless_profile_is_zero() {
        let g = BoxGraph::new(1.0, (0..16).map(|i| [i, 0]).collect(), []).unwrap();
        let p = common_neighbor_profile(&g, 0.0).unwrap();
        assert_eq!(p.rows.len(), 5);
        assert!(p.rows.iter().all(|r| r.count == 0));
        assert_eq!(p.c_emp, 0.0);
        assert_eq!(p.max_forbidden, 1);
    }

    #[test]
    fn complete_bipartite_matches_enumeration() {
        for m in [1usize, 3, 8, 13] {
            let keys = (0..2 * m as i64).map(|i| [i * 10, (i % 3) * 7]).collect();
            let edges = (0..m).flat_map(|i| (m..2 * m).map(move |j| (i, j)));
            let g = BoxGraph::new(1.0, keys, edges).unwrap();
            assert_eq!(g.edge_count(), (m * m) as u64);
            for radius in [0.0, 15.0, 40.0] {
                let p = common_neighbor_profile(&g, radius).unwrap();
                let counts: Vec<u64> = p.rows.iter().map(|r| r.count).collect();
                assert_eq!(
                    counts,
                    brute_profile(&g, radius),
                    "m = {m}, radius = {radius}"
                );
            }
            // same side shares all m neighbours; v itself is forbidden
            let p = common_neighbor_profile(&g, 0.0).unwrap();
            assert_eq!(p.rows[0].count, (m - 1) as u64);
        }
    }

    #[test]
    fn circle_box_graph_profile() {
        let e = Epsilon::dyadic(6).unwrap();
        let c = certify(&gen_circle(4096).unwrap(), e).unwrap();
        let g = BoxGraph::from_matrix(&c.boxes, &c.matrix);
        assert_eq!(
            2 * g.edge_count() + c.matrix.diagonal_ones(),
            c.matrix.ones()
        );
        // 10√ε exceeds the diameter here, so everything would be excluded
        assert_eq!(
            common_neighbor_profile(&g, default_forbidden_radius(e))
                .unwrap()
                .c_emp,
            0.0
        );
        let p = common_neighbor_profile(&g, 2.0 * e.value().sqrt()).unwrap();
        assert!(p.c_emp.is_finite() && p.c_emp > 0.0);
        let counts: Vec<u64> = p.rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, brute_profile(&g, p.forbidden_radius));
    }

    #[test]
    fn planted_edge_growth() {
        let ks = [10_000u64, 40_000, 160_000, 640_000, 2_560_000];
        let e: Vec<(u64, u64)> = ks
            .iter()
            .map(|&k| (k, (k as f64).powf(1.5).round() as u64))
            .collect();
        let g = edge_growth_check(&e).unwrap();
        assert!((g.fit.slope - 1.5).abs() < 1e-6);
        let sq: Vec<(u64, u64)> = ks.iter().map(|&k| (k, k * k)).collect();
        assert!((edge_growth_check(&sq).unwrap().fit.slope - 2.0).abs() < 1e-12);
        // the adjusted fit removes a planted log factor
        let logged: Vec<(u64, u64)> = ks
            .iter()
            .map(|&k| {
                let k = k as f64;
                (k as u64, (k.powf(1.5) * k.ln().sqrt()).round() as u64)
            })
            .collect();
        let g = edge_growth_check(&logged).unwrap();
        assert!((g.log_adjusted.slope - 1.5).abs() < 1e-6);
        assert!(g.fit.slope > 1.5);
    }

    #[test]
    fn edge_growth_rejects_bad_input() {
        assert!(edge_growth_check(&[(10, 10), (20, 20), (30, 30)]).is_err());
        assert!(edge_growth_check(&[(10, 10), (10, 20), (30, 30), (40, 40)]).is_err());
        assert!(edge_growth_check(&[(10, 0), (20, 20), (30, 30), (40, 40)]).is_err());
    }
}
