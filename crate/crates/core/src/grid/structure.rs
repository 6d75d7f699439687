//! Reattaching edges to an inserted axis-parallel structure, and parity
//! repair along it.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::geom::{intersect_segments, Point, Segment, SegmentIntersection, Window, Q};
use crate::guillotine::{EdgeSet, Provenance, TaggedSegment};

/// Edits made while reattaching edges to a structure.
#[derive(Clone, Debug, Default)]
pub struct Reattach {
    pub removed: Vec<Segment>,
    /// Original segments replaced by their outer parts.
    pub replaced: Vec<Segment>,
    pub outer_before: Vec<Segment>,
    pub outer_after: Vec<Segment>,
    pub moved: Vec<(Point, Point)>,
}

/// Parameter along `e` of its point intersections with `structure`;
/// `None` if `e` overlaps a structure segment.
fn hits(e: &Segment, structure: &[Segment]) -> Option<Vec<(Q, usize)>> {
    let mut out = Vec::new();
    for (i, s) in structure.iter().enumerate() {
        match intersect_segments(e, s) {
            SegmentIntersection::None => {}
            SegmentIntersection::Point(p) => out.push((e.closest_param(&p), i)),
            SegmentIntersection::Overlap(..) => return None,
        }
    }
    Some(out)
}

/// Cuts every edge accepted by `select` at its first and last contact with
/// `structure`, drops the middle part and slides each contact to the point
/// of its structure segment nearest the outer endpoint.
///
/// Endpoints strictly inside `interior` lose their outer part entirely.
pub fn reattach(
    edges: &EdgeSet,
    structure: &[Segment],
    interior: Option<&Window>,
    select: impl Fn(&Segment) -> bool,
) -> (EdgeSet, Reattach) {
    let mut out = EdgeSet::default();
    let mut rep = Reattach::default();
    for t in &edges.segments {
        let e = &t.segment;
        let touched = if e.is_degenerate() || !select(e) { None } else { hits(e, structure) };
        let Some(mut h) = touched.filter(|h| !h.is_empty()) else {
            out.segments.push(t.clone());
            continue;
        };
        h.sort();
        let (t_first, s_first) = h[0].clone();
        let (t_last, s_last) = h[h.len() - 1].clone();
        let inside = |p: &Point| interior.is_some_and(|w| w.contains_open(p));
        // contact only at an endpoint with nothing to remove
        let only_endpoint = h.iter().all(|(u, _)| u.is_zero() || *u == Q::from_integer(1.into()));
        if only_endpoint && interior.is_none() {
            out.segments.push(t.clone());
            continue;
        }
        rep.replaced.push(e.clone());
        let first = e.point_at(&t_first);
        let last = e.point_at(&t_last);
        let start = if inside(&e.a) { e.a.clone() } else { first.clone() };
        let end = if inside(&e.b) { e.b.clone() } else { last.clone() };
        rep.removed.push(Segment::new(start, end));
        for (end, contact, sidx) in [(&e.a, first, s_first), (&e.b, last, s_last)] {
            if inside(end) || *end == contact {
                continue;
            }
            let snapped = structure[sidx].closest_point(end);
            rep.outer_before.push(Segment::new(end.clone(), contact.clone()));
            rep.outer_after.push(Segment::new(end.clone(), snapped.clone()));
            if snapped != contact {
                rep.moved.push((contact, snapped.clone()));
            }
            out.segments.push(TaggedSegment { segment: Segment::new(end.clone(), snapped), ..t.clone() });
        }
    }
    (out, rep)
}

/// Pieces of `structure` between consecutive vertices of the planarised
/// edge set.
fn structure_pieces(vertices: &[Point], structure: &[Segment]) -> Vec<Segment> {
    let mut out = BTreeSet::new();
    for s in structure {
        if s.is_degenerate() {
            continue;
        }
        let mut on: Vec<(Q, &Point)> = vertices.iter().filter(|v| s.contains_point(v)).map(|v| (s.closest_param(v), v)).collect();
        on.sort();
        for w in on.windows(2) {
            if w[0].1 != w[1].1 {
                out.insert(Segment::new(w[0].1.clone(), w[1].1.clone()).canonical());
            }
        }
    }
    out.into_iter().collect()
}

/// Minimal-ish set of structure pieces whose duplication restores the
/// degree parity every vertex had in `before`; `None` if a vertex whose
/// parity changed is off the structure or a structure component has an odd
/// number of them.
///
/// Exact on forests; on a structure with cycles each fundamental cycle is
/// flipped in when that shortens the join.
pub fn parity_join(before: &EdgeSet, edges: &EdgeSet, structure: &[Segment]) -> Option<Vec<Segment>> {
    let g = edges.planarize();
    let was: BTreeSet<Point> = before.planarize().odd_vertices().into_iter().collect();
    let now: BTreeSet<Point> = g.odd_vertices().into_iter().collect();
    let odd: BTreeSet<Point> = was.symmetric_difference(&now).cloned().collect();
    if odd.is_empty() {
        return Some(Vec::new());
    }
    let pieces = structure_pieces(&g.vertices, structure);
    let mut ids: BTreeMap<Point, usize> = BTreeMap::new();
    let mut pts: Vec<Point> = Vec::new();
    let mut id = |p: &Point, pts: &mut Vec<Point>| {
        *ids.entry(p.clone()).or_insert_with(|| {
            pts.push(p.clone());
            pts.len() - 1
        })
    };
    let links: Vec<(usize, usize)> = pieces.iter().map(|s| (id(&s.a, &mut pts), id(&s.b, &mut pts))).collect();
    if odd.iter().any(|p| !pts.contains(p)) {
        return None;
    }
    let n = pts.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(a, b)) in links.iter().enumerate() {
        adj[a].push((b, k));
        adj[b].push((a, k));
    }
    // spanning forest by DFS, then subtree parities bottom-up
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let mut tree = vec![false; links.len()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(u, k) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((v, k));
                    tree[k] = true;
                    stack.push(u);
                }
            }
        }
    }
    let mut parity: Vec<bool> = pts.iter().map(|p| odd.contains(p)).collect();
    let mut join = vec![false; links.len()];
    for &v in order.iter().rev() {
        match parent[v] {
            Some((p, k)) => {
                if parity[v] {
                    join[k] = true;
                    parity[p] = !parity[p];
                }
            }
            None if parity[v] => return None,
            None => {}
        }
    }
    let len = |j: &[bool]| -> f64 { j.iter().zip(&pieces).filter(|(x, _)| **x).map(|(_, s)| s.length()).sum() };
    for (k, &(a, b)) in links.iter().enumerate() {
        if tree[k] {
            continue;
        }
        let mut flipped = join.clone();
        flipped[k] = !flipped[k];
        for kk in tree_path(&parent, a, b) {
            flipped[kk] = !flipped[kk];
        }
        if len(&flipped) < len(&join) {
            join = flipped;
        }
    }
    Some(join.iter().zip(pieces).filter(|(x, _)| **x).map(|(_, s)| s).collect())
}

fn tree_path(parent: &[Option<(usize, usize)>], a: usize, b: usize) -> Vec<usize> {
    let up = |mut v: usize| {
        let mut chain = vec![(v, None)];
        while let Some((p, k)) = parent[v] {
            chain.push((p, Some(k)));
            v = p;
        }
        chain
    };
    let ca = up(a);
    let cb = up(b);
    let in_b: BTreeSet<usize> = cb.iter().map(|x| x.0).collect();
    let meet = ca.iter().find(|x| in_b.contains(&x.0)).map(|x| x.0).expect("same tree");
    let mut out = Vec::new();
    for chain in [ca, cb] {
        for w in chain.windows(2) {
            if w[0].0 == meet {
                break;
            }
            out.extend(w[1].1);
        }
    }
    out
}

/// Adds `segs` with provenance `Repair`.
pub fn add_repair(edges: &mut EdgeSet, segs: &[Segment]) {
    for s in segs {
        edges.push(s.clone(), Provenance::Repair, None);
    }
}

/// Exact length of axis-parallel pieces.
pub fn axis_length(segs: &[Segment]) -> Q {
    crate::guillotine::exact_length(segs).expect("structure segments are axis-parallel")
}
