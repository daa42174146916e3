//! Simulated annealing over planar configurations of diameter 1, minimizing
//! `neighbors / antipodes` at fixed `ε`.
//!
//! The objective is piecewise constant in the coordinates, so there is no
//! gradient to follow; results are evidence about extremal configurations,
//! not optimality claims.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{count_pairs_grid, PairCounts};
use crate::error::{invalid, Error, Result};
use crate::generators::{gen_circle, gen_random_disk};
use crate::geometry::{Epsilon, PointSet};

/// Largest configuration the search accepts; every proposal recounts all
/// pairs.
pub const MAX_SEARCH_POINTS: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    Circle,
    RandomDisk,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub proposals: usize,
    /// Temperature factor applied after every proposal.
    pub cooling: f64,
    /// Step size runs geometrically from `sigma_start · ε` to
    /// `sigma_end · ε`.
    pub sigma_start: f64,
    pub sigma_end: f64,
    /// Record a trace point every this many proposals.
    pub trace_every: usize,
    pub start: Start,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            proposals: 200_000,
            cooling: 0.999,
            sigma_start: 1.0,
            sigma_end: 0.01,
            trace_every: 100,
            start: Start::Circle,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub step: usize,
    pub current: f64,
    pub best: f64,
    pub temperature: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchState {
    /// Best configuration found.
    #[serde(skip)]
    pub best: PointSet,
    pub best_counts: PairCounts,
    pub best_objective: f64,
    pub initial_objective: f64,
    pub current_objective: f64,
    pub temperature: f64,
    pub seed: u64,
    pub epsilon: f64,
    pub accepted: usize,
    pub proposals: usize,
    /// Whether the start had no antipodes and was replaced by a circle.
    pub reseeded: bool,
    pub trace: Vec<TracePoint>,
}

fn objective(c: &PairCounts) -> f64 {
    c.ratio().unwrap_or(f64::INFINITY)
}

/// Scales about the centroid to diameter exactly at most 1, as close to 1 as
/// rounding allows.
fn renormalize(ps: &PointSet) -> Result<PointSet> {
    let mut out = ps.normalize_to_unit_diameter()?;
    while out.diameter() > 1.0 {
        let c = out.centroid();
        let s = (1.0 - f64::EPSILON) / out.diameter();
        let dim = out.dim();
        let coords = out
            .coords()
            .chunks_exact(dim)
            .flat_map(|p| p.iter().zip(&c).map(move |(x, ci)| ci + (x - ci) * s))
            .collect();
        out = PointSet::new(dim, coords)?;
    }
    Ok(out)
}

pub fn extremal_search(
    n: usize,
    eps: Epsilon,
    seed: u64,
    schedule: &Schedule,
) -> Result<SearchState> {
    let start = match schedule.start {
        Start::Circle => gen_circle(n)?,
        Start::RandomDisk => gen_random_disk(n, seed)?,
    };
    extremal_search_from(start, eps, seed, schedule)
}

/// Anneals from a given planar configuration. A start without antipodes is
/// replaced by a circle of the same size.
pub fn extremal_search_from(
    start: PointSet,
    eps: Epsilon,
    seed: u64,
    schedule: &Schedule,
) -> Result<SearchState> {
    let n = start.len();
    if n > MAX_SEARCH_POINTS {
        return Err(invalid(format!(
            "search is limited to {MAX_SEARCH_POINTS} points, got {n}"
        )));
    }
    if start.dim() != 2 {
        return Err(invalid("search runs on planar configurations"));
    }
    if !(schedule.cooling > 0.0 && schedule.cooling <= 1.0) {
        return Err(invalid(format!(
            "cooling factor {} outside (0, 1]",
            schedule.cooling
        )));
    }
    if !(schedule.sigma_start > 0.0 && schedule.sigma_end > 0.0) {
        return Err(invalid("step sizes must be positive"));
    }
    // after renormalization the diametral pair is antipodal, so only a
    // degenerate start can come without antipodes
    let mut reseeded = false;
    let mut current = match renormalize(&start) {
        Ok(ps) => ps,
        Err(Error::Degenerate(_)) => {
            reseeded = true;
            gen_circle(n)?
        }
        Err(e) => return Err(e),
    };
    let mut counts = count_pairs_grid(&current, eps)?;
    if counts.antipodes == 0 {
        reseeded = true;
        current = gen_circle(n)?;
        counts = count_pairs_grid(&current, eps)?;
    }
    if reseeded {
        log::warn!("search start has no antipodes; restarting from a circle");
    }
    let mut cur_obj = objective(&counts);
    let initial_objective = cur_obj;
    let mut best = current.clone();
    let mut best_counts = counts;
    let mut best_obj = cur_obj;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut temperature = cur_obj;
    let e = eps.value();
    let steps = schedule.proposals.max(1);
    let decay = (schedule.sigma_end / schedule.sigma_start).powf(1.0 / (steps.max(2) - 1) as f64);
    let mut sigma = schedule.sigma_start * e;
    let mut accepted = 0;
    let mut trace = vec![TracePoint {
        step: 0,
        current: cur_obj,
        best: best_obj,
        temperature,
    }];

    for step in 1..=schedule.proposals {
        let i = rng.random_range(0..n);
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        let u: f64 = rng.random();

        let mut coords = current.coords().to_vec();
        coords[2 * i] += sigma * dx;
        coords[2 * i + 1] += sigma * dy;
        let moved = PointSet::new(2, coords).and_then(|p| renormalize(&p));
        if let Ok(cand) = moved {
            let c = count_pairs_grid(&cand, eps)?;
            let obj = objective(&c);
            let delta = obj - cur_obj;
            let accept = obj.is_finite()
                && (delta <= 0.0 || (temperature > 0.0 && u < (-delta / temperature).exp()));
            if accept {
                current = cand;
                cur_obj = obj;
                accepted += 1;
                if obj < best_obj {
                    best = current.clone();
                    best_counts = c;
                    best_obj = obj;
                }
            }
        }
        temperature *= schedule.cooling;
        sigma *= decay;
        if schedule.trace_every > 0 && step % schedule.trace_every == 0 {
            trace.push(TracePoint {
                step,
                current: cur_obj,
                best: best_obj,
                temperature,
            });
        }
    }

    Ok(SearchState {
        best,
        best_counts,
        best_objective: best_obj,
        initial_objective,
        current_objective: cur_obj,
        temperature,
        seed,
        epsilon: e,
        accepted,
        proposals: schedule.proposals,
        reseeded,
        trace,
    })
}

/// Independent chains, one per seed, run in parallel.
pub fn search_restarts(
    n: usize,
    eps: Epsilon,
    seeds: &[u64],
    schedule: &Schedule,
) -> Result<Vec<SearchState>> {
    seeds
        .par_iter()
        .map(|&s| extremal_search(n, eps, s, schedule))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::theorem_floor;

    fn short(proposals: usize) -> Schedule {
        Schedule {
            proposals,
            trace_every: 50,
            ..Schedule::default()
        }
    }

    #[test]
    fn circle_start_improves_or_holds() {
        let e = Epsilon::dyadic(6).unwrap();
        let s = extremal_search(500, e, 7, &short(1500)).unwrap();
        assert!(s.best_objective <= s.initial_objective);
        assert!(s.best_objective >= theorem_floor(e));
        let d = s.best.diameter();
        assert!((1.0 - 1e-9..=1.0 + 1e-9).contains(&d), "{d}");
        assert_eq!(count_pairs_grid(&s.best, e).unwrap(), s.best_counts);
        assert!(s.trace.windows(2).all(|w| w[1].best <= w[0].best));
        assert_eq!(s.trace.len(), 1 + 1500 / 50);
    }

    #[test]
    fn same_seed_same_result() {
        let e = Epsilon::dyadic(5).unwrap();
        let a = extremal_search(200, e, 11, &short(400)).unwrap();
        let b = extremal_search(200, e, 11, &short(400)).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.trace, b.trace);
        let c = extremal_search(200, e, 12, &short(400)).unwrap();
        assert_ne!(a.trace, c.trace);
    }

    #[test]
    fn antipode_free_start_is_reseeded() {
        let e = Epsilon::dyadic(4).unwrap();
        let flat = PointSet::from_2d(&[[0.3, 0.3]; 12]).unwrap();
        let s = extremal_search_from(flat, e, 1, &short(10)).unwrap();
        assert!(s.reseeded);
        assert!(s.best_counts.antipodes > 0);

        let ring = gen_random_disk(50, 3).unwrap();
        assert!(
            !extremal_search_from(ring, e, 1, &short(10))
                .unwrap()
                .reseeded
        );
    }

    #[test]
    fn rejects_large_or_spatial_input() {
        let e = Epsilon::dyadic(4).unwrap();
        assert!(extremal_search(MAX_SEARCH_POINTS + 1, e, 0, &short(1)).is_err());
        let ps = PointSet::new(3, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(extremal_search_from(ps, e, 0, &short(1)).is_err());
    }
}
