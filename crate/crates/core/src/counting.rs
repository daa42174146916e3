//! Exact neighbor / antipode pair counting.
//!
//! Convention: ordered pairs `(i, j)` with `1 ≤ i, j ≤ n`. The diagonal always
//! counts as a neighbor pair and never as an antipode (since `ε < 1`). Ties
//! count: `d ≤ ε` and `d ≥ 1 − ε` are compared exactly.
//!
//! Two engines are provided. [`count_pairs_brute`] is the `O(n²)` reference;
//! [`count_pairs_grid`] hashes points into cells and must return the same
//! integers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{dist, Epsilon, FiniteMetric, PointSet};

/// Diameter slack tolerated by the counting contract.
pub const DIAMETER_TOLERANCE: f64 = 1e-9;

/// Constant `c` used to probe the `ε^{3/4} (log 1/ε)^{-1/4}` lower bound on
/// every instance. Only ever revised downward.
pub const THEOREM_TEST_CONSTANT: f64 = 0.005;

/// Pruning margin for cell-pair decisions. Coordinates are O(1), so floating
/// error in a point's cell assignment or in a computed distance is orders of
/// magnitude below this.
const PRUNE_MARGIN: f64 = 1e-9;

/// Neighbor cells are inflated by this relative amount so that two points
/// within `ε` can never land two cells apart after rounding of `x / side`.
const NEIGHBOR_CELL_INFLATION: f64 = 1e-9;

/// Upper bound on occupied cells for the antipode grid; the cell side starts
/// at `ε/4` and is doubled until the occupancy fits.
const MAX_ANTIPODE_CELLS: usize = 2048;

/// Ordered pair tallies for one point set and one pair of thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub n: u64,
    /// Ordered pairs with distance `≤ near`, diagonal included.
    pub neighbors: u64,
    /// Ordered pairs with distance `≥ far`.
    pub antipodes: u64,
}

impl PairCounts {
    /// Checks the structural invariants every correct count satisfies.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        let sq = n * n;
        let fail = |m: &str| Err(Error::Contract(format!("{m}: {self:?}")));
        if self.neighbors < n {
            return fail("fewer neighbors than points");
        }
        if self.neighbors > sq || self.antipodes > sq - n {
            return fail("count exceeds the number of pairs");
        }
        if !(self.neighbors - n).is_multiple_of(2) || !self.antipodes.is_multiple_of(2) {
            return fail("off-diagonal count is odd");
        }
        Ok(())
    }

    /// `neighbors / antipodes`, or `None` when there are no antipodes.
    pub fn ratio(&self) -> Option<f64> {
        (self.antipodes > 0).then(|| self.neighbors as f64 / self.antipodes as f64)
    }

    /// Whether `neighbors ≥ theorem_floor(ε) · antipodes`.
    pub fn satisfies_floor(&self, eps: Epsilon) -> bool {
        self.neighbors as f64 >= theorem_floor(eps) * self.antipodes as f64
    }
}

/// `c · ε^{3/4} · (ln 1/ε)^{-1/4}` with `c = THEOREM_TEST_CONSTANT`.
pub fn theorem_floor(eps: Epsilon) -> f64 {
    let e = eps.value();
    THEOREM_TEST_CONSTANT * e.powf(0.75) * (1.0 / e).ln().powf(-0.25)
}

/// Rejects sets whose diameter exceeds `1 + DIAMETER_TOLERANCE` and warns on
/// anything above 1.
pub fn check_unit_diameter(ps: &PointSet) -> Result<()> {
    let d = ps.diameter();
    if d > 1.0 + DIAMETER_TOLERANCE {
        return Err(Error::Contract(format!(
            "point set diameter {d} exceeds 1; normalize first"
        )));
    }
    if d > 1.0 {
        log::warn!("point set diameter {d} is slightly above 1");
    }
    Ok(())
}

/// Reference `O(n²)` counter.
pub fn count_pairs_brute(ps: &PointSet, eps: Epsilon) -> Result<PairCounts> {
    check_unit_diameter(ps)?;
    let (near, far) = (eps.value(), eps.far());
    let n = ps.len();
    let (neighbors, antipodes) = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = ps.point(i);
            let mut nb = 0u64;
            let mut an = 0u64;
            for j in 0..n {
                let d = dist(p, ps.point(j));
                nb += (d <= near) as u64;
                an += (d >= far) as u64;
            }
            (nb, an)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(PairCounts {
        n: n as u64,
        neighbors,
        antipodes,
    })
}

/// Points bucketed into axis-aligned cells `⌊x / cell_side⌋`, stored cell by
/// cell in lexicographic key order.
#[derive(Clone, Debug)]
pub struct GridIndex {
    dim: usize,
    cell_side: f64,
    /// `dim` integers per occupied cell, sorted.
    keys: Vec<i64>,
    /// Cell `c` owns slots `starts[c]..starts[c + 1]`.
    starts: Vec<usize>,
    /// Original point index per slot.
    order: Vec<usize>,
    /// Coordinates per slot, `dim` each.
    coords: Vec<f64>,
}

impl GridIndex {
    pub fn build(ps: &PointSet, cell_side: f64) -> Self {
        assert!(cell_side > 0.0 && cell_side.is_finite());
        let dim = ps.dim();
        let n = ps.len();
        let raw: Vec<i64> = ps
            .coords()
            .iter()
            .map(|x| (x / cell_side).floor() as i64)
            .collect();
        let key = |i: usize| &raw[i * dim..(i + 1) * dim];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| key(a).cmp(key(b)).then(a.cmp(&b)));
        let mut keys = Vec::new();
        let mut starts = Vec::new();
        let mut coords = Vec::with_capacity(n * dim);
        for (slot, &i) in order.iter().enumerate() {
            if slot == 0 || key(order[slot - 1]) != key(i) {
                keys.extend_from_slice(key(i));
                starts.push(slot);
            }
            coords.extend_from_slice(ps.point(i));
        }
        starts.push(n);
        GridIndex {
            dim,
            cell_side,
            keys,
            starts,
            order,
            coords,
        }
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    pub fn num_cells(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn cell_key(&self, cell: usize) -> &[i64] {
        &self.keys[cell * self.dim..(cell + 1) * self.dim]
    }

    /// Original indices of the points in `cell`.
    pub fn members(&self, cell: usize) -> &[usize] {
        &self.order[self.starts[cell]..self.starts[cell + 1]]
    }

    /// Coordinates of the points in `cell`, in the order of [`Self::members`].
    pub fn member_coords(&self, cell: usize) -> &[f64] {
        &self.coords[self.starts[cell] * self.dim..self.starts[cell + 1] * self.dim]
    }

    pub fn find(&self, key: &[i64]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.num_cells());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.cell_key(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Min and max Euclidean distance between two closed cells.
    pub fn cell_distance_bounds(&self, a: usize, b: usize) -> (f64, f64) {
        cell_distance_bounds(self.cell_key(a), self.cell_key(b), self.cell_side)
    }

    fn neighbor_offsets(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.dim {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (-1..=1).map(move |o| {
                        let mut w = v.clone();
                        w.push(o);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

/// Ordered pairs `(p, q)`, `p` from `a` and `q` from `b`, with `hit(dist)`.
fn scan_pairs(a: &[f64], b: &[f64], dim: usize, hit: impl Fn(f64) -> bool) -> u64 {
    let mut total = 0u64;
    for p in a.chunks_exact(dim) {
        for q in b.chunks_exact(dim) {
            total += hit(dist(p, q)) as u64;
        }
    }
    total
}

/// Min and max distance between the closed cells `[k·s, (k+1)·s]^d` with
/// integer keys `a` and `b`.
pub(crate) fn cell_distance_bounds(a: &[i64], b: &[i64], side: f64) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (x, y) in a.iter().zip(b) {
        let gap = (x - y).unsigned_abs() as f64;
        let g_lo = (gap - 1.0).max(0.0) * side;
        let g_hi = (gap + 1.0) * side;
        lo += g_lo * g_lo;
        hi += g_hi * g_hi;
    }
    (lo.sqrt(), hi.sqrt())
}

/// Grid-accelerated counter; returns exactly what [`count_pairs_brute`]
/// returns.
pub fn count_pairs_grid(ps: &PointSet, eps: Epsilon) -> Result<PairCounts> {
    check_unit_diameter(ps)?;
    Ok(PairCounts {
        n: ps.len() as u64,
        neighbors: grid_neighbors(ps, eps.value()),
        antipodes: grid_antipodes(ps, eps),
    })
}

fn grid_neighbors(ps: &PointSet, near: f64) -> u64 {
    let grid = GridIndex::build(ps, near * (1.0 + NEIGHBOR_CELL_INFLATION));
    let offsets = grid.neighbor_offsets();
    let dim = ps.dim();
    (0..grid.num_cells())
        .into_par_iter()
        .map(|a| {
            let key = grid.cell_key(a);
            let mut total = 0u64;
            let mut probe = key.to_vec();
            for off in &offsets {
                for (slot, (k, o)) in probe.iter_mut().zip(key.iter().zip(off)) {
                    *slot = k + o;
                }
                let Some(b) = grid.find(&probe) else { continue };
                total += scan_pairs(grid.member_coords(a), grid.member_coords(b), dim, |d| {
                    d <= near
                });
            }
            total
        })
        .sum()
}

fn grid_antipodes(ps: &PointSet, eps: Epsilon) -> u64 {
    let far = eps.far();
    let dim = ps.dim();
    // cell pairs are visited all against all, so keep their number well
    // below the n² point pairs
    let cap = (ps.len() / 4).clamp(16, MAX_ANTIPODE_CELLS);
    let mut side = eps.value() / 4.0;
    let mut grid = GridIndex::build(ps, side);
    while grid.num_cells() > cap {
        side *= 2.0;
        grid = GridIndex::build(ps, side);
    }
    let c = grid.num_cells();
    (0..c)
        .into_par_iter()
        .map(|a| {
            let ma = grid.members(a);
            let mut total = 0u64;
            for b in a..c {
                let (lo, hi) = grid.cell_distance_bounds(a, b);
                if hi + PRUNE_MARGIN < far {
                    continue;
                }
                let mb = grid.members(b);
                if a != b && lo - PRUNE_MARGIN >= far {
                    total += 2 * (ma.len() * mb.len()) as u64;
                    continue;
                }
                let hits = scan_pairs(grid.member_coords(a), grid.member_coords(b), dim, |d| {
                    d >= far
                });
                // (i, j) and (j, i) give the same float, so off-diagonal cell
                // pairs are scanned once and doubled.
                total += if a == b { hits } else { 2 * hits };
            }
            total
        })
        .sum()
}

/// Ordered pair counts in a finite metric: `d ≤ near` (diagonal included) and
/// `d ≥ far`.
pub fn count_pairs_metric(m: &FiniteMetric, near: f64, far: f64) -> Result<PairCounts> {
    let diam = m.diameter();
    if !(near > 0.0 && near < far && far <= diam) {
        return Err(invalid(format!(
            "thresholds must satisfy 0 < near < far <= diameter ({diam}); got near={near}, far={far}"
        )));
    }
    let n = m.len();
    let (neighbors, antipodes) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut nb = 0u64;
            let mut an = 0u64;
            for j in 0..n {
                let d = m.dist(i, j);
                nb += (d <= near) as u64;
                an += (d >= far) as u64;
            }
            (nb, an)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(PairCounts {
        n: n as u64,
        neighbors,
        antipodes,
    })
}

/// Occupied-cell count of the `ε/4` cover and the Cauchy–Schwarz bound
/// derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PigeonholeBound {
    /// Number of occupied cells of side `ε/4`.
    pub k_cover: u64,
    /// `⌈n² / k_cover⌉`, a lower bound on the ordered neighbor count.
    pub bound: u64,
}

/// Covers the set by cells of side `ε/4` (diameter `ε√2/4 < ε/2` in the
/// plane) and returns `⌈n²/k⌉`. Since `n = Σ nᵢ ≤ √k (Σ nᵢ²)^{1/2}` and every
/// same-cell pair is a neighbor pair, the neighbor count is at least this.
pub fn pigeonhole_lower_bound(ps: &PointSet, eps: Epsilon) -> Result<PigeonholeBound> {
    check_unit_diameter(ps)?;
    let side = eps.value() / 4.0;
    if ps.dim() > 15 {
        // a cell of side ε/4 has diameter ε√d/4, which reaches ε at d = 16
        return Err(invalid("pigeonhole cover needs dimension below 16"));
    }
    let grid = GridIndex::build(ps, side);
    let k = grid.num_cells() as u64;
    let n = ps.len() as u64;
    Ok(PigeonholeBound {
        k_cover: k,
        bound: (n * n).div_ceil(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    fn random_unit_set(n: usize, dim: usize, seed: u64) -> PointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<f64> = (0..n * dim).map(|_| rng.random_range(0.0..1.0)).collect();
        let ps = PointSet::new(dim, c).unwrap();
        if n >= 2 {
            ps.normalize_to_unit_diameter().unwrap()
        } else {
            ps
        }
    }

    #[test]
    fn two_far_points() {
        let ps = PointSet::from_2d(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        for f in [count_pairs_brute, count_pairs_grid] {
            let c = f(&ps, eps(0.1)).unwrap();
            assert_eq!((c.neighbors, c.antipodes), (2, 2));
        }
    }

    #[test]
    fn single_point() {
        let ps = PointSet::new(2, vec![0.2, 0.7]).unwrap();
        for f in [count_pairs_brute, count_pairs_grid] {
            let c = f(&ps, eps(0.3)).unwrap();
            assert_eq!((c.neighbors, c.antipodes), (1, 0));
        }
    }

    #[test]
    fn mid_distance_pair_is_neither() {
        let ps = PointSet::from_2d(&[[0.0, 0.0], [0.5, 0.0]]).unwrap();
        let c = count_pairs_grid(&ps, eps(0.1)).unwrap();
        assert_eq!((c.neighbors, c.antipodes), (2, 0));
    }

    #[test]
    fn ties_count() {
        let ps = PointSet::from_2d(&[[0.0, 0.0], [0.25, 0.0], [1.0, 0.0]]).unwrap();
        for f in [count_pairs_brute, count_pairs_grid] {
            let c = f(&ps, eps(0.25)).unwrap();
            // 0–0.25 at exactly ε; 0.25–1 at exactly 1−ε; 0–1 at 1
            assert_eq!((c.neighbors, c.antipodes), (5, 4));
        }
    }

    #[test]
    fn rejects_oversized_sets() {
        let ps = PointSet::from_2d(&[[0.0, 0.0], [1.5, 0.0]]).unwrap();
        assert!(matches!(
            count_pairs_brute(&ps, eps(0.1)),
            Err(Error::Contract(_))
        ));
        assert!(count_pairs_grid(&ps, eps(0.1)).is_err());
    }

    #[test]
    fn grid_matches_brute_on_random_sets() {
        for seed in 0..40 {
            let dim = 2 + (seed as usize % 2);
            let ps = random_unit_set(50 + 37 * seed as usize, dim, seed);
            for k in 3..=8 {
                let e = Epsilon::dyadic(k).unwrap();
                let a = count_pairs_brute(&ps, e).unwrap();
                let b = count_pairs_grid(&ps, e).unwrap();
                assert_eq!(a, b, "seed {seed} eps 2^-{k}");
                a.check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn grid_matches_brute_on_non_dyadic_eps() {
        let ps = random_unit_set(700, 2, 77);
        for e in [0.1, 0.0137, 0.3333, 0.07] {
            assert_eq!(
                count_pairs_brute(&ps, eps(e)).unwrap(),
                count_pairs_grid(&ps, eps(e)).unwrap()
            );
        }
    }

    #[test]
    fn grid_handles_coarse_antipode_cells() {
        // enough spread-out cells to force the antipode grid to coarsen
        let ps = random_unit_set(6000, 2, 5);
        let e = Epsilon::dyadic(9).unwrap();
        assert_eq!(
            count_pairs_brute(&ps, e).unwrap(),
            count_pairs_grid(&ps, e).unwrap()
        );
    }

    #[test]
    fn counts_are_monotone_in_eps() {
        let ps = random_unit_set(400, 2, 3);
        let mut prev: Option<PairCounts> = None;
        for k in (2..=9).rev() {
            let c = count_pairs_grid(&ps, Epsilon::dyadic(k).unwrap()).unwrap();
            if let Some(p) = prev {
                assert!(c.neighbors >= p.neighbors && c.antipodes >= p.antipodes);
            }
            prev = Some(c);
        }
    }

    #[test]
    fn metric_thresholds_validated() {
        let m = FiniteMetric::from_fn(3, |_, _| 1.0).unwrap();
        assert!(count_pairs_metric(&m, 0.5, 0.5).is_err());
        assert!(count_pairs_metric(&m, 0.7, 0.5).is_err());
        assert!(count_pairs_metric(&m, 0.5, 2.0).is_err());
        let c = count_pairs_metric(&m, 0.5, 1.0).unwrap();
        assert_eq!((c.neighbors, c.antipodes), (3, 6));
    }

    #[test]
    fn pigeonhole_examples() {
        let ps = PointSet::from_2d(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let pb = pigeonhole_lower_bound(&ps, eps(0.1)).unwrap();
        assert_eq!((pb.k_cover, pb.bound), (2, 2));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = eps(0.1);
        let tight: Vec<[f64; 2]> = (0..40)
            .map(|_| {
                [
                    0.3 + rng.random_range(0.0..0.001),
                    0.3 + rng.random_range(0.0..0.001),
                ]
            })
            .collect();
        let ps = PointSet::from_2d(&tight).unwrap();
        let pb = pigeonhole_lower_bound(&ps, e).unwrap();
        assert_eq!(pb.k_cover, 1);
        assert_eq!(pb.bound, 1600);
        assert_eq!(count_pairs_grid(&ps, e).unwrap().neighbors, 1600);
    }

    #[test]
    fn floor_value() {
        let e = Epsilon::dyadic(6).unwrap();
        let expected = 0.005 * (1.0f64 / 64.0).powf(0.75) / (64f64.ln()).powf(0.25);
        assert_eq!(theorem_floor(e), expected);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn grid_equals_brute(seed in 0u64..1_000_000, n in 1usize..400, dim in 1usize..4, k in 2u32..9) {
            let ps = random_unit_set(n, dim, seed);
            let e = Epsilon::dyadic(k).unwrap();
            let a = count_pairs_brute(&ps, e).unwrap();
            prop_assert_eq!(a, count_pairs_grid(&ps, e).unwrap());
            prop_assert!(a.check_invariants().is_ok());
            let pb = pigeonhole_lower_bound(&ps, e).unwrap();
            prop_assert!(a.neighbors >= pb.bound);
        }
    }
}
