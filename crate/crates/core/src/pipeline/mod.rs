//! Executable certificate for the antipode bound in the plane.
//!
//! hull → boundary strip → `ε/4` boxes → antipodality matrix `M` → spectra.
//! [`bound_report`] runs the whole chain and checks every link:
//!
//! ```text
//! antipodes ≤ ⟨n, Mn⟩ ≤ λ₁(M)·‖n‖² ≤ √tr(MᵀM)·‖n‖²,   ‖n‖² ≤ neighbors
//! ```

mod boxes;
mod spectral;
mod strip;

pub use boxes::{antipodality_matrix, partition_boxes, AntipodalityMatrix, BoxPartition};
pub use spectral::{
    top_eigenvalue, top_eigenvalue_with, trace_mtm, EigenEstimate, POWER_MAX_ITERATIONS,
    POWER_TOLERANCE,
};
pub use strip::{
    convex_hull, filter_boundary_strip, segment_distance, verify_filter_soundness, BoundaryStrip,
    ConvexHull,
};

use serde::Serialize;

use crate::counting::{check_unit_diameter, count_pairs_grid};
use crate::error::Result;
use crate::geometry::{Epsilon, PointSet};

/// Relative slack granted to the eigenvalue link only; power iteration
/// returns a Rayleigh quotient, which is biased low.
pub const EIGEN_SLACK: f64 = 1e-8;

/// Pass/fail for each link of the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainFlags {
    /// `antipodes ≤ ⟨n, Mn⟩`
    pub antipodes_le_quad_form: bool,
    /// `neighbors ≥ ‖n‖²`
    pub neighbors_ge_norm_sq: bool,
    /// `⟨n, Mn⟩ ≤ λ₁ (1 + 10⁻⁸) ‖n‖²`
    pub quad_form_le_spectral: bool,
    /// `λ₁ ≤ √tr(MᵀM)`
    pub spectral_le_trace: bool,
}

impl ChainFlags {
    pub fn all(&self) -> bool {
        self.antipodes_le_quad_form
            && self.neighbors_ge_norm_sq
            && self.quad_form_le_spectral
            && self.spectral_le_trace
    }
}

/// Every quantity of the certificate chain for one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub epsilon: f64,
    pub exact_antipodes: u64,
    pub exact_neighbors: u64,
    /// Points kept by the boundary-strip filter.
    pub strip_points: u64,
    pub hull_vertices: u64,
    /// Number of occupied `ε/4` boxes.
    pub k: u64,
    /// `k · ε`, the empirical constant in `k ∼ 1/ε`.
    pub k_times_eps: f64,
    pub quad_form: u64,
    pub norm_sq: u64,
    pub lambda1: f64,
    /// Collatz–Wielandt upper bound on `λ₁`.
    pub lambda1_upper: f64,
    pub eigen_iterations: u64,
    pub trace_mtm: u64,
    pub chain: ChainFlags,
    pub chain_ok: bool,
}

impl BoundReport {
    /// `antipodes / neighbors`.
    pub fn exact_ratio(&self) -> f64 {
        self.exact_antipodes as f64 / self.exact_neighbors as f64
    }
}

/// Everything [`bound_report`] builds along the way, for callers that need
/// the intermediate objects (matrix export, graph analysis).
#[derive(Clone, Debug)]
pub struct Certificate {
    pub hull: ConvexHull,
    pub strip: BoundaryStrip,
    pub boxes: BoxPartition,
    pub matrix: AntipodalityMatrix,
    pub report: BoundReport,
}

pub fn bound_report(ps: &PointSet, eps: Epsilon) -> Result<BoundReport> {
    certify(ps, eps).map(|c| c.report)
}

pub fn certify(ps: &PointSet, eps: Epsilon) -> Result<Certificate> {
    check_unit_diameter(ps)?;
    let counts = count_pairs_grid(ps, eps)?;
    let hull = convex_hull(ps)?;
    let strip = filter_boundary_strip(ps, &hull, eps)?;
    let boxes = partition_boxes(&strip.points, eps)?;
    let matrix = antipodality_matrix(&boxes, eps);
    let eig = top_eigenvalue(&matrix)?;
    let trace = trace_mtm(&matrix);
    let quad = u64::try_from(matrix.quad_form(boxes.occupancy())).expect("quad form fits u64");
    let norm_sq = boxes.norm_sq();

    let chain = ChainFlags {
        antipodes_le_quad_form: counts.antipodes <= quad,
        neighbors_ge_norm_sq: counts.neighbors >= norm_sq,
        quad_form_le_spectral: quad as f64 <= eig.lambda * (1.0 + EIGEN_SLACK) * norm_sq as f64,
        spectral_le_trace: eig.lambda <= (trace as f64).sqrt(),
    };
    let report = BoundReport {
        n: counts.n,
        epsilon: eps.value(),
        exact_antipodes: counts.antipodes,
        exact_neighbors: counts.neighbors,
        strip_points: strip.kept.len() as u64,
        hull_vertices: hull.len() as u64,
        k: boxes.k() as u64,
        k_times_eps: boxes.k() as f64 * eps.value(),
        quad_form: quad,
        norm_sq,
        lambda1: eig.lambda,
        lambda1_upper: eig.upper,
        eigen_iterations: eig.iterations as u64,
        trace_mtm: trace,
        chain_ok: chain.all(),
        chain,
    };
    Ok(Certificate {
        hull,
        strip,
        boxes,
        matrix,
        report,
    })
}
