//! Certificates for the shipped counterexamples.

use serde::Serialize;

use super::localization::{ball_clipped_samples, minimum_rectangle, region_polygon_f64, Rect};
use super::oracle::{brute_force_oracle, oracle_over_samples, OracleError, OracleOptions, SampleSet};
use super::Tour;
use crate::geom::{q, segment_distance_sq, to_f64, Cut, Polygon, Segment, Window};
use crate::instance::{Instance, Region};
use crate::span::{classify_cut, CutClass};

/// Required ratio between the ball-restricted and the global optimum.
pub const LOCALIZATION_MARGIN: f64 = 1.05;
/// Required distance between the region span and the tour.
pub const REGION_SPAN_DISTANCE: f64 = 2.0;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Certificate {
    Localization {
        r0: Rect,
        diam_r0: f64,
        c0: (f64, f64),
        ball_radius: f64,
        resolution: f64,
        global_length: f64,
        global_gap: f64,
        /// Sampled optimum over tours inside the ball, and its gap.
        ball_length: f64,
        ball_gap: f64,
        /// `(ball_length - ball_gap) / global_length`.
        ratio: f64,
        global_tour: Tour,
    },
    DisconnectedRegionSpan {
        window: Window,
        cut: Cut,
        class: CutClass,
        region_span: Segment,
        distance: f64,
        tour: Tour,
        tour_gap: f64,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CertifyError {
    #[error("unknown claim {0:?}")]
    UnknownClaim(String),
    #[error("claim needs polygonal regions")]
    NotPolygonal,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("certification failed: {0}")]
    Failed(String),
}

pub fn certify(name: &str, inst: &Instance) -> Result<Certificate, CertifyError> {
    match name {
        "localization" => certify_localization(inst),
        "disconnected_region_span" => certify_region_span(inst),
        other => Err(CertifyError::UnknownClaim(other.to_string())),
    }
}

fn oracle_opts() -> OracleOptions {
    OracleOptions { polygon_spacing: q(1, 4), ..OracleOptions::default() }
}

fn certify_localization(inst: &Instance) -> Result<Certificate, CertifyError> {
    if inst.regions.iter().any(|r| matches!(r, Region::Disk(_))) {
        return Err(CertifyError::NotPolygonal);
    }
    let resolution = 0.25;
    let polys: Vec<Vec<(f64, f64)>> = inst.regions.iter().map(region_polygon_f64).collect();
    let (r0, diam_r0) = minimum_rectangle(&polys, resolution);
    let c0 = (0.5 * (r0[0] + r0[1]), 0.5 * (r0[2] + r0[3]));
    let ball_radius = 2.0 * diam_r0;
    let global = brute_force_oracle(inst, &oracle_opts())?;
    let opts = oracle_opts();
    let mut levels: Vec<Vec<SampleSet>> = Vec::new();
    for h in [0.8, 0.4, 0.2, 0.1] {
        levels.push(polys.iter().map(|p| ball_clipped_samples(p, c0, ball_radius, h)).collect());
    }
    let (ball_length, ball_gap) = if levels[0].iter().any(|s| s.coords.is_empty()) {
        (f64::INFINITY, 0.0)
    } else {
        let st = oracle_over_samples(&levels, opts.threads)?;
        (st.length, st.gap)
    };
    let ratio = (ball_length - ball_gap) / global.tour.length;
    if !(ratio >= LOCALIZATION_MARGIN) {
        return Err(CertifyError::Failed(format!(
            "ball-restricted lower bound {:.6} is only {:.4} times the global tour {:.6}",
            ball_length - ball_gap,
            ratio,
            global.tour.length
        )));
    }
    Ok(Certificate::Localization {
        r0,
        diam_r0,
        c0,
        ball_radius,
        resolution,
        global_length: global.tour.length,
        global_gap: global.gap,
        ball_length,
        ball_gap,
        ratio,
        global_tour: global.tour,
    })
}

fn certify_region_span(inst: &Instance) -> Result<Certificate, CertifyError> {
    let polys: Vec<Polygon> = inst
        .regions
        .iter()
        .map(|r| match r {
            Region::Polygon(p) => Ok(p.clone()),
            Region::Disk(_) => Err(CertifyError::NotPolygonal),
        })
        .collect::<Result<_, _>>()?;
    let oracle = brute_force_oracle(inst, &oracle_opts())?;
    let tour = oracle.tour;
    let window = Window::bounding(tour.points.iter()).ok_or_else(|| CertifyError::Failed("empty tour".into()))?;
    let internal: Vec<Polygon> = polys.into_iter().filter(|p| p.vertices().iter().all(|v| window.contains(v))).collect();
    let edges = tour.segments();
    let x0 = q(0, 1);
    let cut = Cut::vertical(x0, window.clone()).map_err(|_| CertifyError::Failed("cut x = 0 is not inside the tour's bounding box".into()))?;
    let (report, class) = classify_cut(&cut, &edges, &internal, 1, 1);
    let favorable = class.favorable_c.as_ref().is_some_and(|c| c <= &q(1, 1));
    if !favorable {
        return Err(CertifyError::Failed(format!("cut is not favorable: c = {:?}", class.favorable_c.as_ref().map(to_f64))));
    }
    let span = report.region_span_segment.clone().ok_or_else(|| CertifyError::Failed("1-region-span is empty".into()))?;
    let distance = edges.iter().map(|e| to_f64(&segment_distance_sq(e, &span).0).sqrt()).fold(f64::INFINITY, f64::min);
    if !(distance >= REGION_SPAN_DISTANCE) {
        return Err(CertifyError::Failed(format!("region span is only {distance:.4} from the tour")));
    }
    Ok(Certificate::DisconnectedRegionSpan { window, cut, class, region_span: span, distance, tour, tour_gap: oracle.gap })
}
