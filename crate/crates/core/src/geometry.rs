//! Points, point sets, and finite metric spaces.
//!
//! All distances are Euclidean and computed by [`dist`], which sums squared
//! coordinate differences in index order. Every engine in the crate goes
//! through that one routine so threshold comparisons agree bit-for-bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hull;

/// Euclidean distance between two coordinate slices of equal length.
#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        let t = x - y;
        s += t * t;
    }
    s.sqrt()
}

/// A single point in `R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("a point needs at least one coordinate"));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(invalid(format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn distance(&self, other: &Point) -> Result<f64> {
        distance(self, other)
    }
}

/// Checked Euclidean distance.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(dist(&p.0, &q.0))
}

/// Distance threshold `ε ∈ (0, 1)`. Neighbors are pairs at distance `≤ ε`,
/// antipodes pairs at distance `≥ 1 − ε`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < 1.0 {
            Ok(Epsilon(value))
        } else {
            Err(invalid(format!("epsilon must lie in (0, 1), got {value}")))
        }
    }

    /// `2^{-exp}`; `exp` must be at least 1.
    pub fn dyadic(exp: u32) -> Result<Self> {
        Self::new(0.5f64.powi(exp as i32))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The antipode threshold `1 − ε`.
    #[inline]
    pub fn far(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for Epsilon {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Epsilon::new(v)
    }
}

impl From<Epsilon> for f64 {
    fn from(e: Epsilon) -> f64 {
        e.0
    }
}

/// A non-empty finite set of points sharing one dimension, with its diameter
/// computed once at construction.
///
/// Coordinates are stored flat, point-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    diameter: f64,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if coords.is_empty() {
            return Err(invalid("a point set needs at least one point"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(invalid(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(invalid(format!("non-finite coordinate {c}")));
        }
        let diameter = compute_diameter(dim, &coords);
        Ok(PointSet {
            dim,
            coords,
            diameter,
        })
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| invalid("a point set needs at least one point"))?;
        let dim = first.dim();
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            coords.extend_from_slice(p.coords());
        }
        Self::new(dim, coords)
    }

    pub fn from_2d(points: &[[f64; 2]]) -> Result<Self> {
        Self::new(2, points.iter().flatten().copied().collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Planar view of the set; `None` unless `dim == 2`.
    pub fn as_2d(&self) -> Option<Vec<[f64; 2]>> {
        (self.dim == 2).then(|| self.points().map(|p| [p[0], p[1]]).collect())
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in self.points() {
            for (ci, x) in c.iter_mut().zip(p) {
                *ci += x;
            }
        }
        let n = self.len() as f64;
        c.iter_mut().for_each(|ci| *ci /= n);
        c
    }

    /// The points with the given indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointSet::new(self.dim, coords)
    }

    /// Scales the set about its centroid by `1 / diameter`.
    pub fn normalize_to_unit_diameter(&self) -> Result<PointSet> {
        if self.len() < 2 || self.diameter <= 0.0 {
            return Err(Error::Degenerate(
                "cannot normalize a set with zero diameter".into(),
            ));
        }
        let c = self.centroid();
        let s = 1.0 / self.diameter;
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(&c).map(move |(x, ci)| ci + (x - ci) * s))
            .collect();
        PointSet::new(self.dim, coords)
    }
}

fn compute_diameter(dim: usize, coords: &[f64]) -> f64 {
    let n = coords.len() / dim;
    if n < 2 {
        return 0.0;
    }
    match dim {
        1 => {
            let (lo, hi) = coords
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                    (lo.min(x), hi.max(x))
                });
            dist(&[lo], &[hi])
        }
        2 => {
            let pts: Vec<[f64; 2]> = coords.chunks_exact(2).map(|p| [p[0], p[1]]).collect();
            let verts: Vec<[f64; 2]> = hull::hull_indices(&pts)
                .into_iter()
                .map(|i| pts[i])
                .collect();
            hull::calipers_diameter(&verts)
        }
        _ => (0..n)
            .into_par_iter()
            .map(|i| {
                let p = &coords[i * dim..(i + 1) * dim];
                let mut best = 0.0f64;
                for j in i + 1..n {
                    let d = dist(p, &coords[j * dim..(j + 1) * dim]);
                    if d > best {
                        best = d;
                    }
                }
                best
            })
            .reduce(|| 0.0, f64::max),
    }
}

/// A finite metric space stored as a dense symmetric distance table.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetric {
    n: usize,
    table: Vec<f64>,
}

impl FiniteMetric {
    /// Builds a metric from a row-major `n × n` table. Symmetry, zero diagonal
    /// and non-negativity are checked; the triangle inequality is not (see
    /// [`FiniteMetric::check_triangle`]).
    pub fn from_table(n: usize, table: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("a metric space needs at least one point"));
        }
        if table.len() != n * n {
            return Err(invalid(format!(
                "distance table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        for i in 0..n {
            if table[i * n + i] != 0.0 {
                return Err(invalid(format!("d({i},{i}) must be zero")));
            }
            for j in 0..i {
                let d = table[i * n + j];
                if !(d.is_finite() && d >= 0.0) {
                    return Err(invalid(format!("d({i},{j}) = {d} is not a distance")));
                }
                if d != table[j * n + i] {
                    return Err(invalid(format!("d({i},{j}) != d({j},{i})")));
                }
            }
        }
        Ok(FiniteMetric { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut table = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    table[i * n + j] = f(i.min(j), i.max(j));
                }
            }
        }
        Self::from_table(n, table)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.n + j]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn diameter(&self) -> f64 {
        self.table.iter().copied().fold(0.0, f64::max)
    }

    /// Sub-metric on the given points, re-indexed `0..indices.len()`.
    pub fn restrict(&self, indices: &[usize]) -> Result<FiniteMetric> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return Err(invalid(format!("index {bad} out of range")));
        }
        let m = indices.len();
        let mut table = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                table.push(self.dist(i, j));
            }
        }
        FiniteMetric::from_table(m, table)
    }

    /// Checks `d(i,k) ≤ d(i,j) + d(j,k)` on every triple (all of them when
    /// `n ≤ 200`, otherwise on `samples` seeded random triples).
    pub fn check_triangle(&self, samples: usize, seed: u64) -> Result<()> {
        use rand::{Rng, SeedableRng};
        let violated =
            |i: usize, j: usize, k: usize| self.dist(i, k) > self.dist(i, j) + self.dist(j, k);
        let report = |i, j, k| {
            Err(Error::Contract(format!(
                "triangle inequality fails on ({i}, {j}, {k})"
            )))
        };
        if self.n <= 200 {
            for i in 0..self.n {
                for j in 0..self.n {
                    for k in 0..self.n {
                        if violated(i, j, k) {
                            return report(i, j, k);
                        }
                    }
                }
            }
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let (i, j, k) = (
                    rng.random_range(0..self.n),
                    rng.random_range(0..self.n),
                    rng.random_range(0..self.n),
                );
                if violated(i, j, k) {
                    return report(i, j, k);
                }
            }
        }
        Ok(())
    }
}
