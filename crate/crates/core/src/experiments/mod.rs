//! ε-sweeps, scaling fits and annealing search.

mod plot;
mod search;

pub use plot::svg_loglog;
pub use search::{
    extremal_search, extremal_search_from, search_restarts, Schedule, SearchState, Start,
    TracePoint, MAX_SEARCH_POINTS,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{count_pairs_grid, PairCounts};
use crate::error::{invalid, Result};
use crate::generators::GeneratorSpec;
use crate::geometry::Epsilon;
use crate::pipeline::{bound_report, BoundReport};
use crate::stats::least_squares;

/// Expected antipodes per point below which a sweep row is flagged.
pub const MIN_ANTIPODES_PER_POINT: f64 = 10.0;

/// Minimum number of rows with a defined ratio for a fit.
pub const MIN_FIT_ROWS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub n: u64,
    pub neighbors: u64,
    pub antipodes: u64,
    /// `neighbors / antipodes`; `None` when there are no antipodes.
    pub ratio: Option<f64>,
    /// `neighbors ≥ theorem_floor(ε) · antipodes`.
    pub floor_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundReport>,
}

impl SweepRow {
    pub fn from_counts(eps: Epsilon, c: PairCounts) -> Self {
        SweepRow {
            epsilon: eps.value(),
            n: c.n,
            neighbors: c.neighbors,
            antipodes: c.antipodes,
            ratio: c.ratio(),
            floor_ok: c.satisfies_floor(eps),
            bounds: None,
        }
    }
}

/// Generates and counts one instance per `ε`. The generator's own `ε`
/// is overridden by each sweep value; a polygon without an explicit `k`
/// gets its side count from each `ε`.
pub fn sweep(
    spec: &GeneratorSpec,
    eps_list: &[Epsilon],
    with_bounds: bool,
) -> Result<Vec<SweepRow>> {
    if eps_list.is_empty() {
        return Err(invalid("empty ε list"));
    }
    if eps_list.windows(2).any(|w| w[1].value() >= w[0].value()) {
        log::warn!("sweep ε list is not strictly decreasing");
    }
    let rows = eps_list
        .par_iter()
        .map(|&eps| {
            let ps = spec.clone().with_epsilon(eps).generate()?;
            let mut row = SweepRow::from_counts(eps, count_pairs_grid(&ps, eps)?);
            if with_bounds {
                row.bounds = Some(bound_report(&ps, eps)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    for r in &rows {
        let per_point = r.antipodes as f64 / r.n as f64;
        if per_point < MIN_ANTIPODES_PER_POINT {
            log::warn!(
                "ε = {}: {per_point:.2} antipodes per point; n = {} may be too small",
                r.epsilon,
                r.n
            );
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    /// `α` in `ratio ∼ ε^α`.
    pub slope: f64,
    /// In `log₂` units.
    pub intercept: f64,
    pub r_squared: f64,
    /// Smallest and largest `ε` among the rows used.
    pub epsilon_range: [f64; 2],
    pub rows_used: usize,
    /// Rows without antipodes, left out of the fit.
    pub rows_excluded: usize,
}

impl ScalingFit {
    pub fn predict(&self, eps: f64) -> f64 {
        (self.intercept + self.slope * eps.log2()).exp2()
    }
}

/// Least squares of `log₂ ratio` against `log₂ ε`.
pub fn fit_exponent(rows: &[SweepRow]) -> Result<ScalingFit> {
    let usable: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.ratio.map(|q| (r.epsilon, q)))
        .collect();
    if usable.len() < MIN_FIT_ROWS {
        return Err(invalid(format!(
            "fit needs at least {MIN_FIT_ROWS} rows with antipodes, got {}",
            usable.len()
        )));
    }
    let xs: Vec<f64> = usable.iter().map(|u| u.0.log2()).collect();
    let ys: Vec<f64> = usable.iter().map(|u| u.1.log2()).collect();
    let f = least_squares(&xs, &ys)?;
    let lo = usable.iter().map(|u| u.0).fold(f64::INFINITY, f64::min);
    let hi = usable.iter().map(|u| u.0).fold(0.0, f64::max);
    Ok(ScalingFit {
        slope: f.slope,
        intercept: f.intercept,
        r_squared: f.r_squared,
        epsilon_range: [lo, hi],
        rows_used: usable.len(),
        rows_excluded: rows.len() - usable.len(),
    })
}

/// Rows whose ratio falls below the theorem floor curve.
pub fn floor_violations(rows: &[SweepRow]) -> Vec<&SweepRow> {
    rows.iter().filter(|r| !r.floor_ok).collect()
}

/// `ε = 2^{-lo}, …, 2^{-hi}`.
pub fn dyadic_range(lo: u32, hi: u32) -> Result<Vec<Epsilon>> {
    if lo == 0 || lo > hi {
        return Err(invalid(format!("bad dyadic range {lo}:{hi}")));
    }
    (lo..=hi).map(Epsilon::dyadic).collect()
}
