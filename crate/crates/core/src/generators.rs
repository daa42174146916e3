//! Extremal and counterexample configurations.
//!
//! Every Euclidean generator returns a set of diameter at most `1 + 10⁻⁹` and
//! is a pure function of its arguments (randomized families take a seed).

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{dist, Epsilon, FiniteMetric, PointSet};

/// Fraction of `√ε · n` placed at each Reuleaux vertex.
pub const REULEAUX_VERTEX_MASS: f64 = 0.5;

/// Cluster jitter radius as a fraction of `ε`.
const JITTER_FRACTION: f64 = 0.01;

/// Angular radius of the spherical cap in [`gen_origin_plus_cap`]; a cap on
/// the unit sphere has diameter `2 sin(α)`, which is 1 at `α = π/6`.
const CAP_ANGLE: f64 = PI / 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Circle,
    Reuleaux,
    Polygon,
    SphereD,
    OriginPlusCap,
    TwoClusters,
    RandomDisk,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Circle,
        Family::Reuleaux,
        Family::Polygon,
        Family::SphereD,
        Family::OriginPlusCap,
        Family::TwoClusters,
        Family::RandomDisk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Circle => "circle",
            Family::Reuleaux => "reuleaux",
            Family::Polygon => "polygon",
            Family::SphereD => "sphere_d",
            Family::OriginPlusCap => "origin_plus_cap",
            Family::TwoClusters => "two_clusters",
            Family::RandomDisk => "random_disk",
        }
    }

    /// Whether the family's geometry depends on `ε`.
    pub fn needs_epsilon(self) -> bool {
        matches!(
            self,
            Family::Reuleaux | Family::OriginPlusCap | Family::TwoClusters
        )
    }
}

impl std::str::FromStr for Family {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| invalid(format!("unknown generator family '{s}'")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything needed to reproduce one generated point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub epsilon: Option<Epsilon>,
    /// Polygon side count; when absent it is derived from `ε` via
    /// [`polygon_sides_for_eps`].
    pub k: Option<usize>,
    pub d: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize) -> Self {
        GeneratorSpec {
            family,
            n,
            epsilon: None,
            k: None,
            d: 2,
            seed: 0,
        }
    }

    pub fn with_epsilon(mut self, eps: Epsilon) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_dim(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn eps(&self) -> Result<Epsilon> {
        self.epsilon
            .ok_or_else(|| invalid(format!("family {} needs an epsilon", self.family)))
    }

    pub fn generate(&self) -> Result<PointSet> {
        match self.family {
            Family::Circle => gen_circle(self.n),
            Family::Polygon => {
                let k = match (self.k, self.epsilon) {
                    (Some(k), _) => k,
                    (None, Some(e)) => polygon_sides_for_eps(e),
                    (None, None) => {
                        return Err(invalid("polygon needs k or an epsilon to derive it"))
                    }
                };
                gen_polygon(self.n, k)
            }
            Family::Reuleaux => gen_reuleaux(self.n, self.eps()?, self.seed),
            Family::SphereD => gen_sphere_d(self.n, self.d, self.seed),
            Family::OriginPlusCap => gen_origin_plus_cap(self.n, self.d, self.eps()?, self.seed),
            Family::TwoClusters => gen_two_clusters(self.n, self.eps()?, self.seed),
            Family::RandomDisk => gen_random_disk(self.n, self.seed),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points equally spaced by angle on the circle of radius 1/2 about the
/// origin. For even `n` the second half is the exact negation of the first,
/// so opposite samples are present.
pub fn gen_circle(n: usize) -> Result<PointSet> {
    if n < 3 {
        return Err(invalid("circle needs n >= 3"));
    }
    Ok(PointSet::from_2d(&circle_points(n, 0.0)).expect("finite"))
}

fn circle_points(n: usize, phase: f64) -> Vec<[f64; 2]> {
    let half = n / 2;
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(n);
    for i in 0..n {
        if n.is_multiple_of(2) && i >= half {
            let [x, y] = pts[i - half];
            pts.push([-x, -y]);
        } else {
            let t = TAU * (i as f64 + phase) / n as f64;
            pts.push([0.5 * t.cos(), 0.5 * t.sin()]);
        }
    }
    pts
}

/// Smallest even side count `k ≥ 4` near `π / √(2ε)` whose apothem satisfies
/// `2a = cos(π/k) ≥ 1 − ε`, so every point on a side is an antipode of every
/// point on the opposite side.
pub fn polygon_sides_for_eps(eps: Epsilon) -> usize {
    let half = PI / (2.0 * (2.0 * eps.value()).sqrt());
    let mut k = (2 * half.ceil() as usize).max(4);
    while 2.0 * polygon_apothem(k) < eps.far() {
        k += 2;
    }
    k
}

/// `(1/2) cos(π/k)`, the apothem of the regular `k`-gon of circumradius 1/2.
pub fn polygon_apothem(k: usize) -> f64 {
    0.5 * (PI / k as f64).cos()
}

/// Regular `k`-gon of circumradius 1/2 (so diameter 1 for even `k`) with `n`
/// points spread by arclength along the perimeter, every vertex included.
///
/// Side `j` carries `⌊n/k⌋` or `⌈n/k⌉` points starting at its first vertex.
pub fn gen_polygon(n: usize, k: usize) -> Result<PointSet> {
    if k < 4 || !k.is_multiple_of(2) {
        return Err(invalid(format!("polygon needs an even k >= 4, got {k}")));
    }
    if n < k {
        return Err(invalid(format!("polygon needs n >= k ({n} < {k})")));
    }
    let verts: Vec<[f64; 2]> = (0..k)
        .map(|j| {
            let t = TAU * j as f64 / k as f64;
            [0.5 * t.cos(), 0.5 * t.sin()]
        })
        .collect();
    let (base, rem) = (n / k, n % k);
    let mut pts = Vec::with_capacity(n);
    for j in 0..k {
        let m = base + usize::from(j < rem);
        let (a, b) = (verts[j], verts[(j + 1) % k]);
        for i in 0..m {
            let t = i as f64 / m as f64;
            pts.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    Ok(PointSet::from_2d(&pts).expect("finite"))
}

/// Vertices of the unit equilateral triangle underlying the Reuleaux triangle.
pub fn reuleaux_vertices() -> [[f64; 2]; 3] {
    [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]]
}

/// Points placed at each Reuleaux vertex for `n` total points.
pub fn reuleaux_vertex_count(n: usize, eps: Epsilon) -> usize {
    (REULEAUX_VERTEX_MASS * eps.value().sqrt() * n as f64).ceil() as usize
}

/// Reuleaux triangle of width 1 with a jittered cluster at each vertex and the
/// remaining points equally spaced by arclength over the three arcs.
pub fn gen_reuleaux(n: usize, eps: Epsilon, seed: u64) -> Result<PointSet> {
    if n < 30 {
        return Err(invalid("reuleaux needs n >= 30"));
    }
    let m = reuleaux_vertex_count(n, eps);
    if 3 * m >= n {
        return Err(invalid(format!(
            "vertex clusters of {m} leave no arc points for n = {n}"
        )));
    }
    let v = reuleaux_vertices();
    let mut rng = rng(seed);
    let jitter = JITTER_FRACTION * eps.value();
    let mut pts = Vec::with_capacity(n);
    for (vi, &c) in v.iter().enumerate() {
        // interior bisector at each vertex points to the centroid
        let g = [0.5, 3f64.sqrt() / 6.0];
        let bis = (g[1] - c[1]).atan2(g[0] - c[0]);
        let mut placed = 0;
        while placed < m {
            let r = jitter * rng.random::<f64>().sqrt();
            let t = bis + rng.random_range(-1.0..1.0) * (50f64).to_radians();
            let p = [c[0] + r * t.cos(), c[1] + r * t.sin()];
            if v.iter()
                .enumerate()
                .all(|(wi, w)| wi == vi || dist(&p, w) <= 1.0)
            {
                pts.push(p);
                placed += 1;
            }
        }
    }
    // arc `a` is centred at vertex `a` and spans 60° facing it
    let starts = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
    let arcs = n - 3 * m;
    let seg = PI / 3.0;
    for i in 0..arcs {
        let s = PI * i as f64 / arcs as f64;
        let a = ((s / seg) as usize).min(2);
        let t = starts[a] + (s - a as f64 * seg);
        let c = v[a];
        pts.push([c[0] + t.cos(), c[1] + t.sin()]);
    }
    Ok(PointSet::from_2d(&pts).expect("finite"))
}

/// `n` points on the sphere of radius 1/2 in `R^d`.
///
/// `d = 2`: equally spaced circle with a seeded phase. `d = 3`: Fibonacci
/// lattice under a seeded rotation. `d > 3`: seeded random start followed by
/// pairwise-repulsion steps until the minimum separation reaches
/// [`sphere_min_separation`].
pub fn gen_sphere_d(n: usize, d: usize, seed: u64) -> Result<PointSet> {
    if d < 2 {
        return Err(invalid("sphere needs d >= 2"));
    }
    if n < 10 {
        return Err(invalid("sphere needs n >= 10"));
    }
    let mut rng = rng(seed);
    let mut coords: Vec<f64> = match d {
        2 => {
            let phase = rng.random::<f64>();
            circle_points(n, phase).into_iter().flatten().collect()
        }
        3 => fibonacci_sphere(n, &mut rng),
        _ => repulsion_sphere(n, d, &mut rng),
    };
    for p in coords.chunks_exact_mut(d) {
        project_to_radius(p, 0.5);
    }
    PointSet::new(d, coords)
}

/// Guaranteed minimum pairwise separation of [`gen_sphere_d`]:
/// `(1/4) · n^{-1/(d-1)}`.
pub fn sphere_min_separation(n: usize, d: usize) -> f64 {
    0.25 * (n as f64).powf(-1.0 / (d as f64 - 1.0))
}

fn project_to_radius(p: &mut [f64], r: f64) {
    let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    p.iter_mut().for_each(|x| *x *= r / norm);
}

fn golden_angle() -> f64 {
    PI * (3.0 - 5f64.sqrt())
}

fn fibonacci_sphere(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let rot = random_rotation3(rng);
    let ga = golden_angle();
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let z = 1.0 - (2 * i + 1) as f64 / n as f64;
        let r = (1.0 - z * z).sqrt();
        let t = ga * i as f64;
        let p = [r * t.cos(), r * t.sin(), z];
        for row in &rot {
            out.push(0.5 * (row[0] * p[0] + row[1] * p[1] + row[2] * p[2]));
        }
    }
    out
}

/// Rotation matrix from a uniformly random unit quaternion.
fn random_rotation3(rng: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let mut q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= norm);
    let [w, x, y, z] = q;
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

fn random_unit(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            v.iter_mut().for_each(|x| *x /= norm);
            return v;
        }
    }
}

fn min_separation(coords: &[f64], d: usize) -> f64 {
    let n = coords.len() / d;
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(dist(
                &coords[i * d..(i + 1) * d],
                &coords[j * d..(j + 1) * d],
            ));
        }
    }
    best
}

fn repulsion_sphere(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut coords: Vec<f64> = (0..n)
        .flat_map(|_| random_unit(d, rng).into_iter().map(|x| 0.5 * x))
        .collect();
    let target = sphere_min_separation(n, d);
    let reach = 2.0 * target;
    let mut disp = vec![0.0; n * d];
    while min_separation(&coords, d) < target {
        disp.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            for j in i + 1..n {
                let (pi, pj) = (&coords[i * d..(i + 1) * d], &coords[j * d..(j + 1) * d]);
                let r = dist(pi, pj);
                if r >= reach {
                    continue;
                }
                // coincident points get pushed along a fixed axis
                let w = if r > 0.0 {
                    0.5 * (reach - r) / r
                } else {
                    0.5 * reach
                };
                for a in 0..d {
                    let delta = if r > 0.0 {
                        pi[a] - pj[a]
                    } else {
                        f64::from(u8::from(a == 0))
                    };
                    disp[i * d + a] += w * delta;
                    disp[j * d + a] -= w * delta;
                }
            }
        }
        for (c, dv) in coords.iter_mut().zip(&disp) {
            *c += dv;
        }
        for p in coords.chunks_exact_mut(d) {
            project_to_radius(p, 0.5);
        }
    }
    coords
}

/// `δ = ε^{(d−1)/2}`, the origin mass fraction for [`gen_origin_plus_cap`].
pub fn origin_cap_delta(eps: Epsilon, d: usize) -> f64 {
    eps.value().powf((d as f64 - 1.0) / 2.0)
}

/// `⌈δ n⌉` points jittered at the origin plus `n` points quasi-uniform on a
/// spherical cap of the unit sphere (angular radius 30° about the last axis).
///
/// Origin jitter is confined to the cone of half-angle 30° about the cap axis,
/// which keeps every origin-to-cap distance below 1.
pub fn gen_origin_plus_cap(n: usize, d: usize, eps: Epsilon, seed: u64) -> Result<PointSet> {
    if d < 2 {
        return Err(invalid("origin-plus-cap needs d >= 2"));
    }
    if n < 2 {
        return Err(invalid("origin-plus-cap needs n >= 2"));
    }
    let mut rng = rng(seed);
    let m = (origin_cap_delta(eps, d) * n as f64).ceil() as usize;
    let jitter = JITTER_FRACTION * eps.value();
    let mut coords = Vec::with_capacity((n + m) * d);
    for _ in 0..m {
        let r = jitter * rng.random::<f64>().sqrt();
        let dir = cap_direction(d, CAP_ANGLE, &mut rng);
        coords.extend(dir.into_iter().map(|x| r * x));
    }
    match d {
        2 => {
            for i in 0..n {
                let a = -CAP_ANGLE + 2.0 * CAP_ANGLE * i as f64 / (n - 1) as f64;
                coords.extend([a.sin(), a.cos()]);
            }
        }
        3 => {
            let ga = golden_angle();
            let zmin = CAP_ANGLE.cos();
            for i in 0..n {
                let z = 1.0 - (1.0 - zmin) * (i as f64 + 0.5) / n as f64;
                let r = (1.0 - z * z).sqrt();
                let t = ga * i as f64;
                coords.extend([r * t.cos(), r * t.sin(), z]);
            }
        }
        _ => {
            for _ in 0..n {
                coords.extend(cap_direction(d, CAP_ANGLE, &mut rng));
            }
        }
    }
    PointSet::new(d, coords)
}

/// Uniform random unit vector within angle `alpha` of the last axis.
fn cap_direction(d: usize, alpha: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // polar angle density ∝ sin^{d-2}(ψ) on [0, α], by rejection
    let psi = loop {
        let psi = rng.random::<f64>() * alpha;
        let accept = (psi.sin() / alpha.sin()).powi(d as i32 - 2);
        if rng.random::<f64>() <= accept {
            break psi;
        }
    };
    let tangent = random_unit(d - 1, rng);
    let mut v: Vec<f64> = tangent.into_iter().map(|x| x * psi.sin()).collect();
    v.push(psi.cos());
    v
}

/// Two jittered clusters of `⌊n/2⌋` and `⌈n/2⌉` points, radius `ε/20`, with
/// centers `1 − ε/2` apart. Every cross pair is an antipode and every
/// within-cluster pair a neighbor.
pub fn gen_two_clusters(n: usize, eps: Epsilon, seed: u64) -> Result<PointSet> {
    if n < 2 {
        return Err(invalid("two clusters need n >= 2"));
    }
    let e = eps.value();
    let half = (1.0 - e / 2.0) / 2.0;
    let radius = e / 20.0;
    let mut rng = rng(seed);
    let mut pts = Vec::with_capacity(n);
    for (cx, count) in [(-half, n / 2), (half, n - n / 2)] {
        for _ in 0..count {
            let r = radius * rng.random::<f64>().sqrt();
            let t = rng.random::<f64>() * TAU;
            pts.push([cx + r * t.cos(), r * t.sin()]);
        }
    }
    Ok(PointSet::from_2d(&pts).expect("finite"))
}

/// `n` uniform points in the disk of radius 1/2.
pub fn gen_random_disk(n: usize, seed: u64) -> Result<PointSet> {
    if n < 1 {
        return Err(invalid("random disk needs n >= 1"));
    }
    let mut rng = rng(seed);
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            let r = 0.5 * rng.random::<f64>().sqrt();
            let t = rng.random::<f64>() * TAU;
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    Ok(PointSet::from_2d(&pts).expect("finite"))
}

/// Star metric on `{0, …, n−1}`: `d(0, j) = 1`, `d(i, j) = 2` for distinct
/// leaves.
pub fn star_metric(n: usize) -> Result<FiniteMetric> {
    if n < 2 {
        return Err(invalid("star metric needs n >= 2"));
    }
    FiniteMetric::from_fn(n, |i, _| if i == 0 { 1.0 } else { 2.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_pairs_brute;

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    fn per_point_counts(ps: &PointSet, e: Epsilon) -> (f64, f64) {
        let c = count_pairs_brute(ps, e).unwrap();
        let n = ps.len() as f64;
        (c.antipodes as f64 / n, c.neighbors as f64 / n)
    }

    #[test]
    fn circle_examples() {
        let c = gen_circle(4).unwrap();
        let expect = [[0.5, 0.0], [0.0, 0.5], [-0.5, 0.0], [0.0, -0.5]];
        for (p, q) in c.points().zip(expect) {
            assert!(dist(p, &q) < 1e-15);
        }
        assert!(gen_circle(2).is_err());
        let big = gen_circle(2000).unwrap();
        assert!((big.diameter() - 1.0).abs() <= 1e-15);
        assert!(gen_circle(2001).unwrap().diameter() < 1.0);
    }

    #[test]
    fn circle_per_point_scaling() {
        let e = eps(1.0 / 64.0);
        let n = 2000.0;
        let (an, nb) = per_point_counts(&gen_circle(2000).unwrap(), e);
        let (ta, tn) = (e.value().sqrt() * n, e.value() * n);
        assert!(an >= ta / 2.0 && an <= 2.0 * ta, "{an} vs {ta}");
        assert!(nb >= tn / 2.0 && nb <= 2.0 * tn, "{nb} vs {tn}");
    }

    #[test]
    fn polygon_examples() {
        assert!((polygon_apothem(4) - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((polygon_apothem(4) - 0.353553).abs() < 1e-6);
        let hex = gen_polygon(6, 6).unwrap();
        assert_eq!(hex.len(), 6);
        assert!((hex.diameter() - 1.0).abs() < 1e-15);
        for (j, p) in hex.points().enumerate() {
            let t = TAU * j as f64 / 6.0;
            assert_eq!(p, &[0.5 * t.cos(), 0.5 * t.sin()]);
        }
        assert!(gen_polygon(10, 5).is_err());
        assert!(gen_polygon(3, 4).is_err());
        assert!(gen_polygon(10, 2).is_err());
        assert_eq!(gen_polygon(1001, 8).unwrap().len(), 1001);
    }

    #[test]
    fn polygon_apothem_matches_coordinates() {
        for k in [4usize, 6, 10, 36, 64] {
            let ps = gen_polygon(4 * k, k).unwrap();
            // side midpoints lie at the apothem
            for j in 0..k {
                let (a, b) = (ps.point(4 * j), ps.point((4 * j + 4) % (4 * k)));
                let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
                assert!((dist(&mid, &[0.0, 0.0]) - polygon_apothem(k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn polygon_antipodes_near_sqrt_eps() {
        let e = eps(1.0 / 256.0);
        let k = polygon_sides_for_eps(e);
        assert_eq!(k, 36);
        let n = 20000usize;
        let ps = gen_polygon(n, k).unwrap();
        let c = crate::counting::count_pairs_grid(&ps, e).unwrap();
        let target = e.value().sqrt() * (n * n) as f64;
        let r = c.antipodes as f64 / target;
        assert!((1.0 / 3.0..=3.0).contains(&r), "{r}");
    }

    #[test]
    fn polygon_converges_to_circle() {
        let k = 64;
        let ps = gen_polygon(64 * 50, k).unwrap();
        let worst_radial = ps
            .points()
            .map(|p| (0.5 - dist(p, &[0.0, 0.0])).abs())
            .fold(0.0, f64::max);
        assert!(worst_radial < 2e-3);
        // circle-to-polygon direction: sample the circle densely
        let circ = gen_circle(1000).unwrap();
        let worst = circ
            .points()
            .map(|c| {
                ps.points()
                    .map(|p| dist(c, p))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        assert!(worst < 2e-3, "{worst}");
    }

    #[test]
    fn reuleaux_structure() {
        let e = eps(1.0 / 64.0);
        let ps = gen_reuleaux(10000, e, 1).unwrap();
        assert_eq!(ps.len(), 10000);
        assert!(ps.diameter() <= 1.0 + 1e-9);
        assert_eq!(reuleaux_vertices()[2], [0.5, 3f64.sqrt() / 2.0]);
        let m = reuleaux_vertex_count(10000, e);
        for (vi, v) in reuleaux_vertices().iter().enumerate() {
            for p in ps.points().skip(vi * m).take(m) {
                assert!(dist(p, v) <= e.value() / 100.0);
            }
        }
        assert!(gen_reuleaux(20, e, 0).is_err());
    }

    #[test]
    fn reuleaux_counts_near_predictions() {
        let e = eps(1.0 / 64.0);
        let n = 10000usize;
        let ps = gen_reuleaux(n, e, 3).unwrap();
        let c = crate::counting::count_pairs_grid(&ps, e).unwrap();
        let nn = (n * n) as f64;
        let ra = c.antipodes as f64 / (e.value().sqrt() * nn);
        let rn = c.neighbors as f64 / (e.value() * nn);
        assert!((1.0 / 3.0..=3.0).contains(&ra), "antipodes ratio {ra}");
        assert!((1.0 / 3.0..=3.0).contains(&rn), "neighbors ratio {rn}");
    }

    #[test]
    fn sphere_constraints() {
        for (d, n) in [(2usize, 50usize), (3, 500), (4, 300), (5, 200)] {
            let ps = gen_sphere_d(n, d, 7).unwrap();
            for p in ps.points() {
                assert!((dist(p, &vec![0.0; d]) - 0.5).abs() <= 1e-12);
            }
            assert!(min_separation(ps.coords(), d) >= sphere_min_separation(n, d));
            assert!(ps.diameter() <= 1.0 + 1e-9);
        }
        assert!(gen_sphere_d(5, 3, 0).is_err());
        assert!(gen_sphere_d(50, 1, 0).is_err());
    }

    #[test]
    fn sphere_d2_matches_circle_asymptotics() {
        let e = eps(1.0 / 64.0);
        let a = per_point_counts(&gen_sphere_d(2000, 2, 11).unwrap(), e);
        let b = per_point_counts(&gen_circle(2000).unwrap(), e);
        assert!(
            (a.0 - b.0).abs() <= 2.0 && (a.1 - b.1).abs() <= 2.0,
            "{a:?} {b:?}"
        );
    }

    #[test]
    fn origin_plus_cap_examples() {
        assert_eq!(origin_cap_delta(eps(1.0 / 16.0), 3), 1.0 / 16.0);
        let e = eps(1.0 / 64.0);
        let n = 5000usize;
        let ps = gen_origin_plus_cap(n, 2, e, 0).unwrap();
        let c = count_pairs_brute(&ps, e).unwrap();
        let target = origin_cap_delta(e, 2) * (n * n) as f64;
        let r = c.antipodes as f64 / target;
        assert!((1.0 / 3.0..=3.0).contains(&r), "{r}");
        for seed in 0..5 {
            for d in [2usize, 3, 4] {
                let ps = gen_origin_plus_cap(400, d, eps(0.05), seed).unwrap();
                assert!(ps.diameter() <= 1.0 + 1e-9, "d {d}: {}", ps.diameter());
            }
        }
    }

    #[test]
    fn two_cluster_counts() {
        let ps = gen_two_clusters(8, eps(0.1), 0).unwrap();
        let c = count_pairs_brute(&ps, eps(0.1)).unwrap();
        assert_eq!(c.antipodes, 32);
        assert!(c.neighbors >= 32);
        let ps = gen_two_clusters(2, eps(0.1), 0).unwrap();
        let c = count_pairs_brute(&ps, eps(0.1)).unwrap();
        assert_eq!((c.antipodes, c.neighbors), (2, 2));
    }

    #[test]
    fn star_metric_examples() {
        let m = star_metric(3).unwrap();
        assert_eq!(m.dist(1, 2), 2.0);
        assert_eq!(m.dist(0, 1), 1.0);
        assert_eq!(m.dist(0, 2), 1.0);
        assert_eq!(m.diameter(), 2.0);
        star_metric(50).unwrap().check_triangle(0, 0).unwrap();
        assert!(star_metric(1).is_err());
    }

    #[test]
    fn generators_are_deterministic_and_bounded() {
        let e = eps(1.0 / 32.0);
        for fam in Family::ALL {
            let spec = GeneratorSpec::new(fam, 600).with_epsilon(e).with_seed(42);
            let a = spec.generate().unwrap();
            let b = spec.generate().unwrap();
            assert_eq!(a.coords(), b.coords(), "{fam}");
            assert!(a.diameter() <= 1.0 + 1e-9, "{fam}: {}", a.diameter());
        }
    }

    #[test]
    fn family_names_round_trip() {
        for fam in Family::ALL {
            assert_eq!(fam.name().parse::<Family>().unwrap(), fam);
        }
        assert!("triangle".parse::<Family>().is_err());
    }
}
