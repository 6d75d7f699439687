//! Intersections of an axis-parallel cut with edge sets and polygons,
//! clipped to the open window interior.

use std::cmp::Ordering;

use serde::Serialize;

use super::polygon::Polygon;
use super::primitives::{Cut, Segment};
use super::rational::Q;

/// A maximal connected piece of `cut ∩ set ∩ int(W)`, as an interval of the
/// coordinate along the cut. `lo == hi` is a single (degenerate) point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutComponent {
    #[serde(with = "super::rational::serde_q")]
    pub lo: Q,
    #[serde(with = "super::rational::serde_q")]
    pub hi: Q,
    /// `lo` was clipped to the window boundary (it is not an interior endpoint).
    pub lo_on_boundary: bool,
    pub hi_on_boundary: bool,
}

impl CutComponent {
    pub fn degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn segment(&self, cut: &Cut) -> Segment {
        cut.segment(&self.lo, &self.hi)
    }
}

/// Interval of the along-coordinate where `s` meets the cut line, if any.
pub fn segment_on_line(cut: &Cut, s: &Segment) -> Option<(Q, Q)> {
    let ca = cut.across(&s.a);
    let cb = cut.across(&s.b);
    let c = &cut.coord;
    if ca == c && cb == c {
        let (u, v) = (cut.along(&s.a), cut.along(&s.b));
        return Some(if u <= v { (u.clone(), v.clone()) } else { (v.clone(), u.clone()) });
    }
    let sa = ca.cmp(c);
    let sb = cb.cmp(c);
    if sa == sb {
        return None;
    }
    // exactly one crossing point
    let t = (c - ca) / (cb - ca);
    let ua = cut.along(&s.a);
    let ub = cut.along(&s.b);
    let v = ua + t * (ub - ua);
    Some((v.clone(), v))
}

/// Clips raw intervals to the open window interior and merges them into
/// sorted, pairwise disjoint components.
pub fn merge_clip(cut: &Cut, mut raw: Vec<(Q, Q)>) -> Vec<CutComponent> {
    let (wlo, whi) = cut.window.along_range(cut.orientation);
    raw.retain(|(lo, hi)| hi > wlo && lo < whi);
    raw.sort();
    let mut out: Vec<CutComponent> = Vec::new();
    for (lo, hi) in raw {
        let (lo, lo_b) = if &lo <= wlo { (wlo.clone(), true) } else { (lo, false) };
        let (hi, hi_b) = if &hi >= whi { (whi.clone(), true) } else { (hi, false) };
        if let Some(last) = out.last_mut() {
            if lo <= last.hi {
                if hi > last.hi {
                    last.hi = hi;
                    last.hi_on_boundary = hi_b;
                }
                continue;
            }
        }
        out.push(CutComponent { lo, hi, lo_on_boundary: lo_b, hi_on_boundary: hi_b });
    }
    out
}

/// Connected components of `cut ∩ ⋃edges ∩ int(W)`, sorted along the cut.
pub fn cut_segment_components<'a>(cut: &Cut, edges: impl IntoIterator<Item = &'a Segment>) -> Vec<CutComponent> {
    let raw = edges.into_iter().filter_map(|s| segment_on_line(cut, s)).collect();
    merge_clip(cut, raw)
}

/// Raw closed intervals of `cut-line ∩ region` (not clipped to the window).
pub fn polygon_line_intervals(cut: &Cut, region: &Polygon) -> Vec<(Q, Q)> {
    let mut params: Vec<Q> = Vec::new();
    for e in region.edges() {
        if let Some((lo, hi)) = segment_on_line(cut, &e) {
            params.push(lo);
            params.push(hi);
        }
    }
    params.sort();
    params.dedup();
    if params.is_empty() {
        return Vec::new();
    }
    let two = Q::from_integer(2.into());
    let mut out: Vec<(Q, Q)> = Vec::new();
    let mut open: Option<Q> = None;
    for i in 0..params.len() {
        let t = &params[i];
        if region.contains(&cut.point_at(t)) {
            if open.is_none() {
                open = Some(t.clone());
            }
        }
        let gap_inside = i + 1 < params.len() && region.contains(&cut.point_at(&((t + &params[i + 1]) / &two)));
        if !gap_inside {
            if let Some(start) = open.take() {
                out.push((start, t.clone()));
            }
        }
    }
    out
}

/// Maximal subsegments of the cut inside the closed region, clipped to the
/// open window interior and sorted along the cut.
pub fn cut_polygon_components(cut: &Cut, region: &Polygon) -> Vec<CutComponent> {
    merge_clip(cut, polygon_line_intervals(cut, region))
}

pub fn cut_polygon_intervals(cut: &Cut, region: &Polygon) -> Vec<Segment> {
    cut_polygon_components(cut, region).iter().map(|c| c.segment(cut)).collect()
}

/// Interior endpoints `p_1..p_ξ` of a component list; a degenerate component
/// contributes its point twice, endpoints on the window boundary are dropped.
pub fn interior_endpoints(components: &[CutComponent]) -> Vec<Q> {
    let mut out = Vec::with_capacity(components.len() * 2);
    for c in components {
        if !c.lo_on_boundary {
            out.push(c.lo.clone());
        }
        if !c.hi_on_boundary {
            out.push(c.hi.clone());
        }
    }
    out
}

/// Endpoints gathered from several independent component lists, merge-sorted.
pub fn merged_endpoints(lists: &[Vec<CutComponent>]) -> Vec<Q> {
    let mut all: Vec<Q> = lists.iter().flat_map(|l| interior_endpoints(l)).collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    all
}
