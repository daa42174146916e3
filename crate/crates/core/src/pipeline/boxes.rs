//! Grid boxes of side `ε/4` and the 0/1 antipodality matrix over them.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::counting::cell_distance_bounds;
use crate::error::{invalid, Result};
use crate::geometry::{Epsilon, PointSet};

/// Occupied cells of the origin-anchored grid of side `ε/4`, in lexicographic
/// order of their integer coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxPartition {
    cell_side: f64,
    keys: Vec<[i64; 2]>,
    occupancy: Vec<u64>,
}

impl BoxPartition {
    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    /// Number of occupied boxes.
    pub fn k(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[[i64; 2]] {
        &self.keys
    }

    /// The occupancy vector `n`.
    pub fn occupancy(&self) -> &[u64] {
        &self.occupancy
    }

    pub fn total(&self) -> u64 {
        self.occupancy.iter().sum()
    }

    /// `‖n‖² = Σ nᵢ²`.
    pub fn norm_sq(&self) -> u64 {
        self.occupancy.iter().map(|c| c * c).sum()
    }

    /// Closed bounds `([x_lo, y_lo], [x_hi, y_hi])` of box `i`.
    pub fn cell_bounds(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        let [x, y] = self.keys[i];
        let s = self.cell_side;
        (
            [x as f64 * s, y as f64 * s],
            [(x + 1) as f64 * s, (y + 1) as f64 * s],
        )
    }

    /// Min and max distance between closed boxes `i` and `j`.
    pub fn distance_bounds(&self, i: usize, j: usize) -> (f64, f64) {
        cell_distance_bounds(&self.keys[i], &self.keys[j], self.cell_side)
    }
}

pub fn partition_boxes(ps: &PointSet, eps: Epsilon) -> Result<BoxPartition> {
    if ps.dim() != 2 {
        return Err(invalid("box partition is planar"));
    }
    let side = eps.value() / 4.0;
    let mut cells: BTreeMap<[i64; 2], u64> = BTreeMap::new();
    for p in ps.points() {
        let key = [(p[0] / side).floor() as i64, (p[1] / side).floor() as i64];
        *cells.entry(key).or_default() += 1;
    }
    let (keys, occupancy) = cells.into_iter().unzip();
    Ok(BoxPartition {
        cell_side: side,
        keys,
        occupancy,
    })
}

/// Symmetric 0/1 matrix over boxes, stored as sorted adjacency rows.
/// `M_ij = 1` iff the closed boxes `i` and `j` contain points at distance
/// `≥ 1 − ε`, i.e. iff their max corner distance reaches `1 − ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntipodalityMatrix {
    rows: Vec<Vec<u32>>,
}

impl AntipodalityMatrix {
    /// Builds a matrix from adjacency rows, symmetrizing and sorting them.
    pub fn from_edges(k: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut rows = vec![Vec::new(); k];
        for (i, j) in edges {
            if i >= k || j >= k {
                return Err(invalid(format!("edge ({i}, {j}) outside 0..{k}")));
            }
            rows[i].push(j as u32);
            if i != j {
                rows[j].push(i as u32);
            }
        }
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
        }
        Ok(AntipodalityMatrix { rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&(j as u32)).is_ok()
    }

    /// Number of ones.
    pub fn ones(&self) -> u64 {
        self.rows.iter().map(|r| r.len() as u64).sum()
    }

    pub fn diagonal_ones(&self) -> u64 {
        (0..self.k()).filter(|&i| self.get(i, i)).count() as u64
    }

    /// Upper-triangle entries `(i, j)` with `i ≤ j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .map(move |&j| (i, j as usize))
                .filter(|&(i, j)| i <= j)
        })
    }

    /// `⟨n, M n⟩`, exact.
    pub fn quad_form(&self, n: &[u64]) -> u128 {
        assert_eq!(n.len(), self.k());
        self.rows
            .par_iter()
            .enumerate()
            .map(|(i, r)| {
                let s: u128 = r.iter().map(|&j| n[j as usize] as u128).sum();
                n[i] as u128 * s
            })
            .sum()
    }

    /// `y = M x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (yi, r) in y.iter_mut().zip(&self.rows) {
            *yi = r.iter().map(|&j| x[j as usize]).sum();
        }
    }

    /// Dense row-major copy, for small matrices and tests.
    pub fn to_dense(&self) -> Vec<f64> {
        let k = self.k();
        let mut out = vec![0.0; k * k];
        for (i, j) in self.edges() {
            out[i * k + j] = 1.0;
            out[j * k + i] = 1.0;
        }
        out
    }
}

pub fn antipodality_matrix(bp: &BoxPartition, eps: Epsilon) -> AntipodalityMatrix {
    let far = eps.far();
    let k = bp.k();
    let rows = (0..k)
        .into_par_iter()
        .map(|i| {
            (0..k)
                .filter(|&j| bp.distance_bounds(i, j).1 >= far)
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    AntipodalityMatrix { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn two_points_one_cell() {
        let ps = PointSet::from_2d(&[[0.001, 0.001], [0.002, 0.002]]).unwrap();
        let bp = partition_boxes(&ps, eps(0.1)).unwrap();
        assert_eq!(bp.k(), 1);
        assert_eq!(bp.occupancy(), &[2]);
        assert_eq!(bp.norm_sq(), 4);
    }

    #[test]
    fn lexicographic_order() {
        let ps = PointSet::from_2d(&[[0.5, 0.0], [0.0, 0.5], [0.0, 0.0], [0.0, 0.01]]).unwrap();
        let bp = partition_boxes(&ps, eps(0.1)).unwrap();
        assert_eq!(bp.keys(), &[[0, 0], [0, 20], [20, 0]]);
        assert_eq!(bp.occupancy(), &[2, 1, 1]);
        assert_eq!(bp.total(), 4);
    }

    #[test]
    fn matrix_examples() {
        // box centers exactly 1 apart
        let e = eps(0.1);
        let s = e.value() / 4.0;
        let ps =
            PointSet::from_2d(&[[0.5 * s, 0.5 * s], [0.5 * s + 1.0 - 4.0 * s, 0.5 * s]]).unwrap();
        let bp = partition_boxes(&ps, e).unwrap();
        let m = antipodality_matrix(&bp, e);
        assert!(m.get(0, 1) && m.get(1, 0));
        assert!(!m.get(0, 0));

        let adj = PointSet::from_2d(&[[0.5 * s, 0.5 * s], [1.5 * s, 0.5 * s]]).unwrap();
        let bp = partition_boxes(&adj, e).unwrap();
        assert_eq!(antipodality_matrix(&bp, e).ones(), 0);
    }

    #[test]
    fn quad_form_exact() {
        let m = AntipodalityMatrix::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(m.quad_form(&[1, 2, 3]), 2 * (2 + 6));
        assert_eq!(m.ones(), 4);
        assert_eq!(m.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }
}
