//! m-spans, M-region-spans, dark portions and cut classification.

mod classify;
mod dark;

use crate::geom::{cut_polygon_components, cut_segment_components, interior_endpoints, merged_endpoints, Cut, CutComponent, Polygon, Segment, Q};

pub use classify::{
    candidate_count, candidate_cuts, classify_cut, classify_report, find_perfect_cut, half_of, is_central, is_weakly_central, CutClass,
    SpanError, SpanReport, MAX_CANDIDATES,
};
pub use dark::{dark_portions, is_dark_at, is_region_dark_at, region_dark_portions, total_length};

/// Interior endpoints `p_1..p_ξ` of `cut ∩ ⋃edges ∩ int(W)`.
pub fn edge_endpoints(cut: &Cut, edges: &[Segment]) -> Vec<Q> {
    interior_endpoints(&cut_segment_components(cut, edges))
}

/// Interior endpoints of `cut ∩ regions ∩ int(W)`, regions taken one by one.
pub fn region_endpoints(cut: &Cut, regions: &[Polygon]) -> Vec<Q> {
    let lists: Vec<Vec<CutComponent>> = regions.iter().map(|r| cut_polygon_components(cut, r)).collect();
    merged_endpoints(&lists)
}

/// `p_m .. p_{ξ-m+1}` as along-coordinates, or `None` when `ξ <= 2m-2`.
pub fn span_of(endpoints: &[Q], m: usize) -> Option<(Q, Q)> {
    assert!(m >= 1, "span parameter must be positive");
    let xi = endpoints.len();
    if xi + 2 <= 2 * m {
        return None;
    }
    Some((endpoints[m - 1].clone(), endpoints[xi - m].clone()))
}

pub fn m_span(cut: &Cut, edges: &[Segment], m: usize) -> Option<Segment> {
    span_of(&edge_endpoints(cut, edges), m).map(|(a, b)| cut.segment(&a, &b))
}

pub fn region_span(cut: &Cut, regions: &[Polygon], big_m: usize) -> Option<Segment> {
    span_of(&region_endpoints(cut, regions), big_m).map(|(a, b)| cut.segment(&a, &b))
}

/// Whether the closed interval `[lo, hi]` on the cut lies inside `⋃edges`.
pub fn covered_by_edges(cut: &Cut, edges: &[Segment], lo: &Q, hi: &Q) -> bool {
    cut_segment_components(cut, edges).iter().any(|c| &c.lo <= lo && hi <= &c.hi)
}

/// The m-span is empty or contained in the edge set.
pub fn is_m_good(cut: &Cut, edges: &[Segment], m: usize) -> bool {
    match span_of(&edge_endpoints(cut, edges), m) {
        None => true,
        Some((a, b)) => covered_by_edges(cut, edges, &a, &b),
    }
}

/// The M-region-span is empty or contained in the edge set.
pub fn is_region_good(cut: &Cut, edges: &[Segment], regions: &[Polygon], big_m: usize) -> bool {
    match span_of(&region_endpoints(cut, regions), big_m) {
        None => true,
        Some((a, b)) => covered_by_edges(cut, edges, &a, &b),
    }
}

/// Edges that meet the closed window; others never influence a cut of it.
pub fn edges_meeting(window: &crate::geom::Window, edges: &[Segment]) -> Vec<Segment> {
    edges.iter().filter(|e| segment_meets_window(window, e)).cloned().collect()
}

pub fn segment_meets_window(w: &crate::geom::Window, s: &Segment) -> bool {
    if w.contains(&s.a) || w.contains(&s.b) {
        return true;
    }
    let c = w.corners();
    (0..4).any(|i| {
        !matches!(
            crate::geom::intersect_segments(s, &Segment::new(c[i].clone(), c[(i + 1) % 4].clone())),
            crate::geom::SegmentIntersection::None
        )
    })
}
