//! Top eigenvalue and trace of the antipodality matrix.

use serde::Serialize;

use super::boxes::AntipodalityMatrix;
use crate::error::{Error, Result};

/// Relative Rayleigh-quotient change at which power iteration stops.
pub const POWER_TOLERANCE: f64 = 1e-9;
pub const POWER_MAX_ITERATIONS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenEstimate {
    /// Largest Rayleigh quotient seen; a lower bound on `λ₁`.
    pub lambda: f64,
    /// Collatz–Wielandt bound `max_i (Mx)_i / x_i` of the final iterate; an
    /// upper bound on `λ₁` for entrywise non-negative `M`.
    pub upper: f64,
    pub iterations: usize,
}

/// `λ₁(M)` by power iteration from the all-ones vector.
///
/// Iterates on `M + I`: this leaves the eigenvectors alone, makes the top
/// eigenvalue strictly dominant in modulus even for bipartite graphs (where
/// `−λ₁` is also an eigenvalue of `M`), and keeps every iterate positive so
/// the Collatz–Wielandt bound is defined.
pub fn top_eigenvalue(m: &AntipodalityMatrix) -> Result<EigenEstimate> {
    top_eigenvalue_with(m, POWER_TOLERANCE, POWER_MAX_ITERATIONS)
}

pub fn top_eigenvalue_with(
    m: &AntipodalityMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<EigenEstimate> {
    let k = m.k();
    if k == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if m.ones() == 0 {
        return Ok(EigenEstimate {
            lambda: 0.0,
            upper: 0.0,
            iterations: 0,
        });
    }
    let mut x = vec![1.0 / (k as f64).sqrt(); k];
    let mut y = vec![0.0; k];
    let mut best = f64::NEG_INFINITY;
    let mut prev = f64::NAN;
    let mut upper = f64::INFINITY;
    for it in 1..=max_iter {
        m.matvec(&x, &mut y);
        // x has unit norm
        let rq: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        upper = x
            .iter()
            .zip(&y)
            .map(|(a, b)| b / a)
            .fold(f64::NEG_INFINITY, f64::max);
        best = best.max(rq);
        if (rq - prev).abs() <= tol * rq.abs() {
            return Ok(EigenEstimate {
                lambda: best,
                upper,
                iterations: it,
            });
        }
        prev = rq;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi += yi;
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        lower: best,
        upper,
    })
}

/// `tr(MᵀM)`, which for a symmetric 0/1 matrix is its number of ones.
pub fn trace_mtm(m: &AntipodalityMatrix) -> u64 {
    m.ones()
}
