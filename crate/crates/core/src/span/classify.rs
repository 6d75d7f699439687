use num_traits::Zero;
use serde::Serialize;

use super::dark::{dark_portions, region_dark_portions, total_length};
use super::{edge_endpoints, edges_meeting, region_endpoints, span_of};
use crate::geom::rational::{ceil_to, serde_q, serde_q_opt};
use crate::geom::{qi, Cut, Orientation, Polygon, Segment, Window, Q};
use crate::instance::GridSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanReport {
    pub cut: Cut,
    #[serde(with = "serde_q")]
    pub sigma_m: Q,
    #[serde(with = "serde_q")]
    pub sigma_big: Q,
    #[serde(with = "serde_q")]
    pub delta_m: Q,
    #[serde(with = "serde_q")]
    pub delta_big: Q,
    #[serde(with = "serde_q")]
    pub delta_half: Q,
    pub span_segment: Option<Segment>,
    pub region_span_segment: Option<Segment>,
    pub dark_segments: Vec<Segment>,
    pub region_dark_segments: Vec<Segment>,
    pub half_region_dark_segments: Vec<Segment>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutClass {
    /// Smallest c with `σ_m + Σ_M <= c (δ_m + Δ_M)`; `None` if no c works.
    #[serde(with = "serde_q_opt")]
    pub favorable_c: Option<Q>,
    /// Same with `Δ_{M/2}` in place of `Δ_M`.
    #[serde(with = "serde_q_opt")]
    pub weakly_favorable_c: Option<Q>,
    pub central: bool,
    pub weakly_central: bool,
    pub perfect: bool,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SpanError {
    #[error("no perfect half-grid cut in window {0:?}")]
    NoPerfectCut(Window),
    #[error("window has {0} candidate cuts, above the limit of {1}")]
    TooManyCandidates(usize, usize),
}

pub const MAX_CANDIDATES: usize = 200_000;

fn seg_len(s: &Option<Segment>) -> Q {
    s.as_ref().map(|s| total_length(std::slice::from_ref(s))).unwrap_or_else(Q::zero)
}

fn ratio(num: &Q, den: &Q) -> Option<Q> {
    if num.is_zero() {
        Some(Q::zero())
    } else if den.is_zero() {
        None
    } else {
        Some(num / den)
    }
}

pub fn half_of(big_m: usize) -> usize {
    (big_m / 2).max(1)
}

pub fn is_central(cut: &Cut) -> bool {
    cut.margin() >= qi(2)
}

pub fn is_weakly_central(cut: &Cut) -> bool {
    let quarter = cut.extent() / qi(4);
    let r = if quarter < qi(2) { quarter } else { qi(2) };
    cut.margin() >= r
}

pub fn classify_cut(cut: &Cut, edges: &[Segment], regions: &[Polygon], m: usize, big_m: usize) -> (SpanReport, CutClass) {
    let span_segment = span_of(&edge_endpoints(cut, edges), m).map(|(a, b)| cut.segment(&a, &b));
    let region_span_segment = span_of(&region_endpoints(cut, regions), big_m).map(|(a, b)| cut.segment(&a, &b));
    let dark_segments = dark_portions(cut, edges, m);
    let region_dark_segments = region_dark_portions(cut, regions, big_m);
    let half_region_dark_segments = region_dark_portions(cut, regions, half_of(big_m));
    let report = SpanReport {
        cut: cut.clone(),
        sigma_m: seg_len(&span_segment),
        sigma_big: seg_len(&region_span_segment),
        delta_m: total_length(&dark_segments),
        delta_big: total_length(&region_dark_segments),
        delta_half: total_length(&half_region_dark_segments),
        span_segment,
        region_span_segment,
        dark_segments,
        region_dark_segments,
        half_region_dark_segments,
    };
    let class = classify_report(&report);
    (report, class)
}

pub fn classify_report(r: &SpanReport) -> CutClass {
    let num = &r.sigma_m + &r.sigma_big;
    let favorable_c = ratio(&num, &(&r.delta_m + &r.delta_big));
    let weakly_favorable_c = ratio(&num, &(&r.delta_m + &r.delta_half));
    let central = is_central(&r.cut);
    let weakly_central = is_weakly_central(&r.cut);
    let weak8 = weakly_favorable_c.as_ref().is_some_and(|c| c <= &qi(8));
    let perfect = weak8 && (central || (weakly_central && r.sigma_big.is_zero()));
    CutClass { favorable_c, weakly_favorable_c, central, weakly_central, perfect }
}

/// Half-grid coordinates strictly inside `(lo, hi)`, ascending, starting at `from`.
fn half_grid_between(grid: &GridSpec, x_axis: bool, lo: &Q, hi: &Q, from: &Q) -> Vec<Q> {
    let step = &grid.spacing / qi(2);
    let origin = if x_axis { &grid.origin.x } else { &grid.origin.y };
    let start = if from > lo { from.clone() } else { lo.clone() };
    let mut v = ceil_to(&start, origin, &step);
    if &v == lo {
        v += &step;
    }
    let mut out = Vec::new();
    while &v < hi {
        out.push(v.clone());
        v += &step;
    }
    out
}

pub fn candidate_count(window: &Window, grid: &GridSpec) -> usize {
    let step = &grid.spacing / qi(2);
    let w = (window.width() / &step).ceil().to_integer();
    let h = (window.height() / &step).ceil().to_integer();
    use num_traits::ToPrimitive;
    (w + h).to_usize().unwrap_or(usize::MAX)
}

/// Candidate cuts of the window, in tie-break order among equal cost.
pub fn candidate_cuts(window: &Window, grid: &GridSpec) -> Vec<Cut> {
    let mut out = Vec::new();
    for o in [Orientation::Vertical, Orientation::Horizontal] {
        let (lo, hi) = window.across_range(o);
        for v in half_grid_between(grid, o == Orientation::Vertical, lo, hi, lo) {
            out.push(Cut::new(o, v, window.clone()).expect("strictly interior"));
        }
    }
    out
}

fn max_endpoints(edges: &[Segment], regions: &[Polygon]) -> (usize, Option<usize>) {
    let e = 2 * edges.len();
    let r = if regions.iter().all(|p| p.is_convex()) { Some(2 * regions.len()) } else { None };
    (e, r)
}

/// First perfect half-grid cut in the order (σ_m + Σ_M, vertical first, coordinate).
pub fn find_perfect_cut(
    window: &Window,
    edges: &[Segment],
    regions: &[Polygon],
    m: usize,
    big_m: usize,
    grid: &GridSpec,
) -> Result<(SpanReport, CutClass), SpanError> {
    let edges = edges_meeting(window, edges);
    let regions: Vec<Polygon> = regions.iter().filter(|r| region_meets(window, r)).cloned().collect();
    let (ee, re) = max_endpoints(&edges, &regions);
    let spans_vanish = ee + 2 <= 2 * m && re.is_some_and(|r| r + 2 <= 2 * big_m);
    if spans_vanish {
        // Every candidate has cost 0, so the first weakly central one wins.
        for o in [Orientation::Vertical, Orientation::Horizontal] {
            let (lo, hi) = window.across_range(o);
            let quarter = (hi - lo) / qi(4);
            let r = if quarter < qi(2) { quarter } else { qi(2) };
            let from = lo + &r;
            if let Some(v) = half_grid_between(grid, o == Orientation::Vertical, lo, hi, &from).into_iter().next() {
                let cut = Cut::new(o, v, window.clone()).expect("interior");
                if is_weakly_central(&cut) {
                    return Ok(classify_cut(&cut, &edges, &regions, m, big_m));
                }
            }
        }
        return Err(SpanError::NoPerfectCut(window.clone()));
    }
    let count = candidate_count(window, grid);
    if count > MAX_CANDIDATES {
        return Err(SpanError::TooManyCandidates(count, MAX_CANDIDATES));
    }
    let mut scored: Vec<(Q, usize, Cut)> = candidate_cuts(window, grid)
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let s = span_len(&c, &edges, m) + region_span_len(&c, &regions, big_m);
            (s, i, c)
        })
        .collect();
    scored.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    for (cost, _, cut) in scored {
        if cost.is_zero() {
            if is_weakly_central(&cut) {
                return Ok(classify_cut(&cut, &edges, &regions, m, big_m));
            }
            continue;
        }
        let (rep, cls) = classify_cut(&cut, &edges, &regions, m, big_m);
        if cls.perfect {
            return Ok((rep, cls));
        }
    }
    Err(SpanError::NoPerfectCut(window.clone()))
}

fn span_len(cut: &Cut, edges: &[Segment], m: usize) -> Q {
    span_of(&edge_endpoints(cut, edges), m).map(|(a, b)| b - a).unwrap_or_else(Q::zero)
}

fn region_span_len(cut: &Cut, regions: &[Polygon], big_m: usize) -> Q {
    span_of(&region_endpoints(cut, regions), big_m).map(|(a, b)| b - a).unwrap_or_else(Q::zero)
}

fn region_meets(w: &Window, r: &Polygon) -> bool {
    let b = r.bounding_window();
    b.xmin <= w.xmax && w.xmin <= b.xmax && b.ymin <= w.ymax && w.ymin <= b.ymax
}

