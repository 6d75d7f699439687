//! Exact dark portions of a cut.
//!
//! The set of endpoints on the orthogonal cut through `cut.point_at(t)` only
//! changes combinatorially at finitely many `t`: edge (or polygon) vertices,
//! crossings of an edge with the cut line, and crossings with the window
//! sides parallel to the cut. Between consecutive breakpoints darkness is
//! constant apart from isolated points, so each open interval is decided at
//! its midpoint.

use super::{edge_endpoints, region_endpoints, span_of};
use num_traits::Signed;

use crate::geom::{qi, Cut, Polygon, Segment, Q};

/// Along-coordinate where `s` reaches across-value `v`, if it does.
fn along_at_across(cut: &Cut, s: &Segment, v: &Q) -> Option<Q> {
    let (a0, a1) = (cut.across(&s.a), cut.across(&s.b));
    if a0 == a1 {
        return None;
    }
    let (lo, hi) = if a0 < a1 { (a0, a1) } else { (a1, a0) };
    if v < lo || v > hi {
        return None;
    }
    let t = (v - a0) / (a1 - a0);
    let (b0, b1) = (cut.along(&s.a), cut.along(&s.b));
    Some(b0 + t * (b1 - b0))
}

fn breakpoints<'a>(cut: &Cut, segs: impl Iterator<Item = &'a Segment>) -> Vec<Q> {
    let (wlo, whi) = cut.window.along_range(cut.orientation);
    let (clo, chi) = cut.window.across_range(cut.orientation);
    let mut out = vec![wlo.clone(), whi.clone()];
    for s in segs {
        out.push(cut.along(&s.a).clone());
        out.push(cut.along(&s.b).clone());
        for v in [&cut.coord, clo, chi] {
            if let Some(t) = along_at_across(cut, s, v) {
                out.push(t);
            }
        }
    }
    out.retain(|t| t >= wlo && t <= whi);
    out.sort();
    out.dedup();
    out
}

fn orthogonal(cut: &Cut, t: &Q) -> Cut {
    Cut::new(cut.orientation.other(), t.clone(), cut.window.clone()).expect("breakpoint midpoint lies inside the window")
}

fn inside(endpoints: &[Q], m: usize, c: &Q) -> bool {
    match span_of(endpoints, m) {
        Some((a, b)) => &a <= c && c <= &b,
        None => false,
    }
}

/// Whether the point at along-coordinate `t` is m-dark.
pub fn is_dark_at(cut: &Cut, edges: &[Segment], m: usize, t: &Q) -> bool {
    inside(&edge_endpoints(&orthogonal(cut, t), edges), m, &cut.coord)
}

pub fn is_region_dark_at(cut: &Cut, regions: &[Polygon], big_m: usize, t: &Q) -> bool {
    inside(&region_endpoints(&orthogonal(cut, t), regions), big_m, &cut.coord)
}

fn collect(cut: &Cut, bps: &[Q], dark: impl Fn(&Q) -> bool) -> Vec<Segment> {
    let two = qi(2);
    let mut spans: Vec<(Q, Q)> = Vec::new();
    for w in bps.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        if !dark(&mid) {
            continue;
        }
        match spans.last_mut() {
            Some(last) if last.1 == w[0] => last.1 = w[1].clone(),
            _ => spans.push((w[0].clone(), w[1].clone())),
        }
    }
    spans.iter().map(|(a, b)| cut.segment(a, b)).collect()
}

/// Maximal m-dark segments of the cut, sorted and pairwise disjoint.
pub fn dark_portions(cut: &Cut, edges: &[Segment], m: usize) -> Vec<Segment> {
    if edges.is_empty() {
        return Vec::new();
    }
    let bps = breakpoints(cut, edges.iter());
    collect(cut, &bps, |t| is_dark_at(cut, edges, m, t))
}

pub fn region_dark_portions(cut: &Cut, regions: &[Polygon], big_m: usize) -> Vec<Segment> {
    if regions.is_empty() {
        return Vec::new();
    }
    let edges: Vec<Segment> = regions.iter().flat_map(|r| r.edges()).collect();
    let bps = breakpoints(cut, edges.iter());
    collect(cut, &bps, |t| is_region_dark_at(cut, regions, big_m, t))
}

/// Total length of axis-parallel segments (exact).
pub fn total_length(segs: &[Segment]) -> Q {
    segs.iter().map(|s| (&s.a.x - &s.b.x).abs() + (&s.a.y - &s.b.y).abs()).sum()
}
