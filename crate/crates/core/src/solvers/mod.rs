//! Reference solvers: brute-force oracle, centres heuristic, bounds,
//! localization, the desk-scale guillotine program and certificates.

mod bounds;
mod centers;
mod certify;
mod dp;
mod localization;
mod oracle;

use serde::Serialize;

use crate::geom::Point;

pub use bounds::{large_external_bound, lower_bound, BoundError};
pub use centers::{centers_additive_bound, centers_heuristic};
pub use certify::{certify, Certificate, CertifyError, LOCALIZATION_MARGIN, REGION_SPAN_DISTANCE};
pub use dp::{certified_le, dp_solve, DpError, DpResult, DP_MAX_REGIONS, DP_REGION_OFFSET, DP_WORK_LIMIT};
pub use localization::{localization_candidates, minimum_rectangle, LocalizationReport, Rect};
pub use oracle::{brute_force_oracle, oracle_over_samples, OracleError, OracleOptions, OracleResult, SampleSet, SampledTour};

/// Closed tour given by one touch point per region, in visiting order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tour {
    /// `order[i]` is the region visited at position `i`.
    pub order: Vec<usize>,
    pub points: Vec<Point>,
    pub length: f64,
}

impl Tour {
    pub fn from_points(order: Vec<usize>, points: Vec<Point>) -> Self {
        let length = polyline_length(&points);
        Tour { order, points, length }
    }

    /// Closed polyline as segments (a single point yields one degenerate segment).
    pub fn segments(&self) -> Vec<crate::geom::Segment> {
        crate::geom::closed_polyline(&self.points)
    }
}

pub fn polyline_length(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|i| points[i].dist(&points[(i + 1) % n])).sum()
}

/// Worker count from `TSPN_THREADS`, defaulting to the available parallelism.
pub fn default_threads() -> usize {
    std::env::var("TSPN_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}
