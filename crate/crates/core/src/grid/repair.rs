//! Patching, m-goodness and region-goodness repairs for one cut.

use num_traits::Zero;

use super::structure::{add_repair, axis_length, parity_join, reattach, Reattach};
use super::{RepairError, RepairKind, RepairReport};
use crate::geom::cut::polygon_line_intervals;
use crate::geom::{clip_segment, compare_lengths, intersect_segments, qi, to_f64, Cut, Orientation, Point, Polygon, Segment, SegmentIntersection, Window, Q};
use crate::guillotine::{region_good, EdgeSet, RegionGoodVariant};
use crate::instance::GridSpec;
use crate::span::{edges_meeting, is_m_good, m_span, region_span};

/// Interior crossings of the m-span that trigger a patch on a grid cut.
pub const PATCH_THRESHOLD_GRID: usize = 15;
/// The same on a half-grid cut.
pub const PATCH_THRESHOLD_HALF: usize = 19;

/// Point with the given across- and along-coordinates of a cut.
fn at(o: Orientation, across: &Q, along: &Q) -> Point {
    match o {
        Orientation::Vertical => Point::new(across.clone(), along.clone()),
        Orientation::Horizontal => Point::new(along.clone(), across.clone()),
    }
}

/// Axis flags `(across is x, along is x)` for `GridSpec` helpers.
fn axes(o: Orientation) -> (bool, bool) {
    match o {
        Orientation::Vertical => (true, false),
        Orientation::Horizontal => (false, true),
    }
}

/// `Some(true)` on a grid line, `Some(false)` on a half-grid line.
fn on_grid(cut: &Cut, grid: &GridSpec) -> Result<bool, RepairError> {
    let (ax, _) = axes(cut.orientation);
    if grid.is_half_grid(&cut.coord, ax) {
        Ok(if ax { grid.is_grid_x(&cut.coord) } else { grid.is_grid_y(&cut.coord) })
    } else {
        Err(RepairError::OffGrid)
    }
}

fn local(edges: &EdgeSet, w: &Window) -> Vec<Segment> {
    edges_meeting(w, &edges.plain())
}

/// Edges crossing `span` at a point interior to the edge.
pub fn crossing_count(edges: &[Segment], span: &Segment) -> usize {
    edges
        .iter()
        .filter(|e| match intersect_segments(e, span) {
            SegmentIntersection::Point(p) => p != e.a && p != e.b,
            _ => false,
        })
        .count()
}

/// Grid-rounded along-range `[floor lo, ceil hi]` of a span, at least δ long.
fn rounded(cut: &Cut, span: &Segment, grid: &GridSpec) -> (Q, Q) {
    let (_, al) = axes(cut.orientation);
    let (mut lo, mut hi) = (cut.along(&span.a).clone(), cut.along(&span.b).clone());
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let a = grid.floor(&lo, al);
    let mut b = grid.ceil(&hi, al);
    if a == b {
        b = &a + &grid.spacing;
    }
    (a, b)
}

fn inside_window(w: &Window, o: Orientation, across: (&Q, &Q), along: (&Q, &Q)) -> bool {
    let (c0, c1) = w.across_range(o);
    let (a0, a1) = w.along_range(o);
    c0 <= across.0 && across.1 <= c1 && a0 <= along.0 && along.1 <= a1
}

/// A line at fixed across-coordinate from `lo` to `hi`, split at grid steps.
fn grid_line(o: Orientation, across: &Q, lo: &Q, hi: &Q, step: &Q) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut t = lo.clone();
    while &t < hi {
        let next = std::cmp::min(&t + step, hi.clone());
        out.push(Segment::new(at(o, across, &t), at(o, across, &next)));
        t = next;
    }
    out
}

/// Adds structure, connector and parity duplicates, then reports.
fn finish(
    before: &EdgeSet,
    mut new: EdgeSet,
    rep: Reattach,
    structure: Vec<Segment>,
    connector: Option<Segment>,
    kind: RepairKind,
) -> Result<(EdgeSet, RepairReport), RepairError> {
    let mut all = structure.clone();
    all.extend(connector.clone());
    add_repair(&mut new, &all);
    let join = parity_join(before, &new, &all).ok_or(RepairError::Parity)?;
    add_repair(&mut new, &join);
    let structure_length = axis_length(&structure);
    let parity_length: f64 = join.iter().map(Segment::length).sum();
    let connector_length = connector.as_ref().map_or(0.0, Segment::length);
    let mut after = rep.outer_after.clone();
    after.extend(all);
    after.extend(join.iter().cloned());
    let report = RepairReport {
        kinds: vec![kind],
        added_length: to_f64(&structure_length) + parity_length + connector_length,
        structure_length,
        parity_length,
        connector_length,
        removed_length: rep.removed.iter().map(Segment::length).sum(),
        reattach_delta: rep.outer_after.iter().map(Segment::length).sum::<f64>() - rep.outer_before.iter().map(Segment::length).sum::<f64>(),
        parity_fixes: join,
        moved_points: rep.moved,
        length_change: compare_lengths(&after, &rep.replaced),
    };
    Ok((new, report))
}

/// Replaces the edges crossing a short, heavily crossed m-span by the
/// boundary of a grid box around it.
///
/// Applies when the m-span is shorter than δ and crossed in the interior of
/// at least 15 edges (grid cut) or 19 edges (half-grid cut); otherwise the
/// input is returned unchanged. The box is 2δ wide on a grid cut and δ wide
/// on a half-grid cut, and δ or 2δ along the cut.
pub fn patch_span(edges: &EdgeSet, cut: &Cut, grid: &GridSpec, m: usize) -> Result<(EdgeSet, RepairReport), RepairError> {
    let noop = || Ok((edges.clone(), RepairReport::default()));
    let loc = local(edges, &cut.window);
    let Some(span) = m_span(cut, &loc, m) else { return noop() };
    let grid_cut = on_grid(cut, grid)?;
    let delta = &grid.spacing;
    let threshold = if grid_cut { PATCH_THRESHOLD_GRID } else { PATCH_THRESHOLD_HALF };
    if span.len_sq() >= delta * delta || crossing_count(&loc, &span) < threshold {
        return noop();
    }
    let o = cut.orientation;
    let (ya, yb) = rounded(cut, &span, grid);
    let half_w = if grid_cut { delta.clone() } else { delta / qi(2) };
    let (xa, xb) = (&cut.coord - &half_w, &cut.coord + &half_w);
    let (p0, p1) = (at(o, &xa, &ya), at(o, &xb, &yb));
    let boxw = Window::new(
        std::cmp::min(p0.x.clone(), p1.x.clone()),
        std::cmp::max(p0.x.clone(), p1.x.clone()),
        std::cmp::min(p0.y.clone(), p1.y.clone()),
        std::cmp::max(p0.y.clone(), p1.y.clone()),
    )
    .expect("ordered box");
    let mut structure = grid_line(o, &xa, &ya, &yb, delta);
    structure.extend(grid_line(o, &xb, &ya, &yb, delta));
    let flip = o.other();
    structure.extend(grid_line(flip, &ya, &xa, &xb, delta));
    structure.extend(grid_line(flip, &yb, &xa, &xb, delta));
    let select = |e: &Segment| clip_segment(&boxw, e).is_some_and(|c| !c.is_degenerate() && boxw.contains_open(&c.a.midpoint(&c.b)));
    // a visited grid point strictly inside the box keeps a spoke to the boundary
    let centre = at(o, &cut.coord, &(&ya + delta));
    if grid_cut && &yb - &ya == delta * qi(2) && edges.segments.iter().any(|t| select(&t.segment) && (t.segment.a == centre || t.segment.b == centre)) {
        structure.push(Segment::new(centre, at(o, &cut.coord, &ya)));
    }
    let (new, rep) = reattach(edges, &structure, Some(&boxw), select);
    finish(edges, new, rep, structure, None, RepairKind::Patch)
}

/// Makes `cut` (m+9)-good while keeping every endpoint on the grid.
///
/// A short, heavily crossed span is patched first. What remains is handled
/// by extending the span to grid values (grid cut) or by an H whose bars
/// lie on the grid lines beside the cut (half-grid cut); every edge meeting
/// the inserted structure is cut there and its contacts slid to grid points.
pub fn make_m_good(edges: &EdgeSet, cut: &Cut, grid: &GridSpec, m: usize) -> Result<(EdgeSet, RepairReport), RepairError> {
    let target = m + super::GOOD_OFFSET;
    if is_m_good(cut, &local(edges, &cut.window), target) {
        return Ok((edges.clone(), RepairReport::default()));
    }
    let grid_cut = on_grid(cut, grid)?;
    let (cur, mut report) = patch_span(edges, cut, grid, m)?;
    let loc = local(&cur, &cut.window);
    if is_m_good(cut, &loc, target) {
        return Ok((cur, report));
    }
    let Some(span) = m_span(cut, &loc, m) else { return Ok((cur, report)) };
    let o = cut.orientation;
    let delta = &grid.spacing;
    let (ya, yb) = rounded(cut, &span, grid);
    let (structure, kind) = if grid_cut {
        if !inside_window(&cut.window, o, (&cut.coord, &cut.coord), (&ya, &yb)) {
            return Err(RepairError::OutsideWindow(cut.window.clone()));
        }
        (grid_line(o, &cut.coord, &ya, &yb, &(&yb - &ya)), RepairKind::SpanExtension)
    } else {
        let half = delta / qi(2);
        let (xa, xb) = (&cut.coord - &half, &cut.coord + &half);
        if !inside_window(&cut.window, o, (&xa, &xb), (&ya, &yb)) {
            return Err(RepairError::OutsideWindow(cut.window.clone()));
        }
        let (_, al) = axes(o);
        let (lo, hi) = (cut.along(&span.a), cut.along(&span.b));
        let mid = (lo + hi) / qi(2);
        let (f, c) = (grid.floor(&mid, al), grid.ceil(&mid, al));
        let bar = if &mid - &f <= &c - &mid { f } else { c };
        let bar = bar.clamp(ya.clone(), yb.clone());
        let mut s = grid_line(o, &xa, &ya, &yb, &(&yb - &ya));
        s.extend(grid_line(o, &xb, &ya, &yb, &(&yb - &ya)));
        s.push(Segment::new(at(o, &xa, &bar), at(o, &xb, &bar)));
        (s, RepairKind::HShape)
    };
    let (new, rep) = reattach(&cur, &structure, None, |_| true);
    let (out, r) = finish(&cur, new, rep, structure, None, kind)?;
    report.absorb(r);
    Ok((out, report))
}

/// Grid-value range `[a, b]` on the line `across = g` meeting `region`
/// within the window's along-range.
fn grid_range_on_line(cut: &Cut, g: &Q, region: &Polygon, grid: &GridSpec) -> Option<(Q, Q)> {
    let o = cut.orientation;
    let (_, al) = axes(o);
    let bb = region.bounding_window();
    let (b0, b1) = bb.along_range(o);
    let (w0, w1) = cut.window.along_range(o);
    let lo = std::cmp::min(b0, w0) - qi(1);
    let hi = std::cmp::max(b1, w1) + qi(1);
    let (p0, p1) = (at(o, &(g - qi(1)), &lo), at(o, &(g + qi(1)), &hi));
    let big = Window::new(p0.x, p1.x, p0.y, p1.y).ok()?;
    let line = Cut::new(o, g.clone(), big).ok()?;
    polygon_line_intervals(&line, region).into_iter().find_map(|(a, b)| {
        let a = grid.ceil(std::cmp::max(&a, w0), al);
        let b = grid.floor(std::cmp::min(&b, w1), al);
        (a <= b).then_some((a, b))
    })
}

/// Shortest grid segment on the line `across = g` meeting every region.
fn visiting_segment(cut: &Cut, g: &Q, regions: &[&Polygon], grid: &GridSpec) -> Option<(Q, Q)> {
    let mut top: Option<Q> = None;
    let mut bot: Option<Q> = None;
    for r in regions {
        let (a, b) = grid_range_on_line(cut, g, r, grid)?;
        top = Some(top.map_or(a.clone(), |t| std::cmp::max(t, a)));
        bot = Some(bot.map_or(b.clone(), |t| std::cmp::min(t, b)));
    }
    let (top, bot) = (top?, bot?);
    if bot < top {
        return Some((bot, top));
    }
    // a common grid value: widen to one grid step inside the window
    let (w0, w1) = cut.window.along_range(cut.orientation);
    let d = &grid.spacing;
    if &(&top + d) <= w1 {
        Some((top.clone(), top + d))
    } else if &(&top - d) >= w0 {
        Some((&top - d, top))
    } else {
        None
    }
}

/// Nearest edge endpoint in the window to the structure, joined by a segment
/// from the structure point closest to it.
fn grid_connector(structure: &Segment, edges: &[Segment], w: &Window) -> Option<Segment> {
    let mut best: Option<(Q, Point, Point)> = None;
    for e in edges {
        for v in [&e.a, &e.b] {
            if !w.contains(v) {
                continue;
            }
            let p = structure.closest_point(v);
            let d = p.dist_sq(v);
            let better = match &best {
                None => true,
                Some((bd, bv, _)) => d < *bd || (d == *bd && v < bv),
            };
            if better {
                best = Some((d, v.clone(), p));
            }
        }
    }
    best.map(|(_, v, p)| Segment::new(p, v))
}

/// Makes `cut` region-good at `M + c` under the both-sides definition.
///
/// On a grid cut the region-span is extended to grid values and inserted.
/// On a half-grid cut a segment on the grid line directly beside the cut
/// visits every region meeting the span (left or low side first, the right
/// or high side if shorter). Edges crossing the inserted segment are cut and
/// reattached; a detached segment is joined to the nearest edge endpoint.
pub fn make_region_good(
    edges: &EdgeSet,
    regions: &[Polygon],
    cut: &Cut,
    grid: &GridSpec,
    big_m: usize,
    c: usize,
) -> Result<(EdgeSet, RepairReport), RepairError> {
    let noop = || Ok((edges.clone(), RepairReport::default()));
    let level = big_m + c;
    let loc = local(edges, &cut.window);
    let Some(rs) = region_span(cut, regions, level) else { return noop() };
    if region_good(cut, &loc, regions, level, RegionGoodVariant::BothSidesObligation) {
        return noop();
    }
    let o = cut.orientation;
    let delta = &grid.spacing;
    let (across, lo, hi, kind) = if on_grid(cut, grid)? {
        let (a, b) = rounded(cut, &rs, grid);
        if !inside_window(&cut.window, o, (&cut.coord, &cut.coord), (&a, &b)) {
            return Err(RepairError::OutsideWindow(cut.window.clone()));
        }
        (cut.coord.clone(), a, b, RepairKind::SpanExtension)
    } else {
        let touched: Vec<&Polygon> = regions.iter().filter(|r| r.meets_segment(&rs)).collect();
        let half = delta / qi(2);
        let left = &cut.coord - &half;
        let right = &cut.coord + &half;
        let l = visiting_segment(cut, &left, &touched, grid);
        let r = visiting_segment(cut, &right, &touched, grid);
        let pick = match (l, r) {
            (Some(l), Some(r)) => {
                if &r.1 - &r.0 < &l.1 - &l.0 {
                    (right, r)
                } else {
                    (left, l)
                }
            }
            (Some(l), None) => (left, l),
            (None, Some(r)) => (right, r),
            (None, None) => return Err(RepairError::NoVisitingSegment),
        };
        (pick.0, pick.1 .0, pick.1 .1, RepairKind::VisitingSegment)
    };
    let line = Segment::new(at(o, &across, &lo), at(o, &across, &hi));
    let structure = vec![line.clone()];
    let (new, rep) = reattach(edges, &structure, None, |_| true);
    let touching = new.segments.iter().any(|t| !matches!(intersect_segments(&t.segment, &line), SegmentIntersection::None));
    let connector = if touching {
        None
    } else {
        let near = local(&new, &cut.window);
        Some(grid_connector(&line, &near, &cut.window).ok_or(RepairError::NothingToConnect)?).filter(|s| !s.len_sq().is_zero())
    };
    finish(edges, new, rep, structure, connector, kind)
}
