//! Minimum-diameter axis-aligned rectangle meeting all regions, and the
//! candidate windows derived from it. Computed in floating point on a grid
//! of candidate x-ranges; the resolution is reported with the result.

use serde::Serialize;

use super::oracle::SampleSet;
use crate::instance::{Instance, Region};

/// Axis-aligned rectangle in reporting coordinates `[xmin, xmax, ymin, ymax]`.
pub type Rect = [f64; 4];

#[derive(Clone, Debug, Serialize)]
pub struct LocalizationReport {
    pub r0: Rect,
    pub diam_r0: f64,
    pub resolution: f64,
    /// `[2 diam, 2 sqrt(2) diam]` when every region meets the boundary of R0.
    pub l_star_bounds: Option<[f64; 2]>,
    pub candidates: Vec<Rect>,
}

pub(crate) fn region_polygon_f64(r: &Region) -> Vec<(f64, f64)> {
    match r {
        Region::Polygon(p) => p.vertices().iter().map(|v| v.to_f64()).collect(),
        Region::Disk(c) => {
            let (cx, cy) = c.to_f64();
            (0..64).map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
                (cx + t.cos(), cy + t.sin())
            }).collect()
        }
    }
}

pub(crate) fn point_in_polygon(poly: &[(f64, f64)], p: (f64, f64)) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1);
            if p.0 < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// y-intervals of the polygon restricted to the vertical line `x`.
fn line_intervals(poly: &[(f64, f64)], x: f64) -> Vec<(f64, f64)> {
    let n = poly.len();
    let mut ys = Vec::new();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let (lo, hi) = if a.0 <= b.0 { (a, b) } else { (b, a) };
        if lo.0 <= x && x <= hi.0 {
            if lo.0 == hi.0 {
                ys.push(lo.1);
                ys.push(hi.1);
            } else {
                ys.push(lo.1 + (x - lo.0) * (hi.1 - lo.1) / (hi.0 - lo.0));
            }
        }
    }
    ys.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for w in ys.windows(2) {
        if point_in_polygon(poly, (x, 0.5 * (w[0] + w[1]))) || w[0] == w[1] {
            out.push((w[0], w[1]));
        }
    }
    if out.is_empty() {
        out.extend(ys.iter().map(|&y| (y, y)));
    }
    out
}

/// y-projection of `poly ∩ {x1 <= x <= x2}` as merged intervals.
fn slab_projection(poly: &[(f64, f64)], x1: f64, x2: f64) -> Vec<(f64, f64)> {
    let mut iv = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let (lo, hi) = if a.0 <= b.0 { (a, b) } else { (b, a) };
        if hi.0 < x1 || lo.0 > x2 {
            continue;
        }
        let at = |x: f64| if hi.0 == lo.0 { lo.1 } else { lo.1 + (x - lo.0) * (hi.1 - lo.1) / (hi.0 - lo.0) };
        let (s, e) = (lo.0.max(x1), hi.0.min(x2));
        let (ya, yb) = if hi.0 == lo.0 { (lo.1, hi.1) } else { (at(s), at(e)) };
        iv.push((ya.min(yb), ya.max(yb)));
    }
    iv.extend(line_intervals(poly, x1));
    iv.extend(line_intervals(poly, x2));
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in iv {
        match out.last_mut() {
            Some(l) if a <= l.1 => l.1 = l.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Shortest `[y1, y2]` meeting every interval union; returns (y1, y2).
fn min_stab(sets: &[Vec<(f64, f64)>]) -> Option<(f64, f64)> {
    if sets.iter().any(|s| s.is_empty()) {
        return None;
    }
    let mut cands: Vec<f64> = sets.iter().flatten().flat_map(|&(a, b)| [a, b]).collect();
    cands.sort_by(f64::total_cmp);
    let mut best: Option<(f64, f64)> = None;
    for &y1 in &cands {
        let mut y2 = y1;
        let mut ok = true;
        for s in sets {
            match s.iter().find(|iv| iv.1 >= y1) {
                Some(iv) => y2 = y2.max(iv.0.max(y1)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && best.is_none_or(|b| y2 - y1 < b.1 - b.0) {
            best = Some((y1, y2));
        }
    }
    best
}

pub fn minimum_rectangle(polys: &[Vec<(f64, f64)>], resolution: f64) -> (Rect, f64) {
    let xmin = polys.iter().flatten().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = polys.iter().flatten().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let n = ((xmax - xmin) / resolution).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| xmin + i as f64 * resolution).collect();
    let mut best: (Rect, f64) = ([0.0; 4], f64::INFINITY);
    for i in 0..xs.len() {
        for j in i..xs.len() {
            let w = xs[j] - xs[i];
            if w >= best.1 {
                break;
            }
            let sets: Vec<Vec<(f64, f64)>> = polys.iter().map(|p| slab_projection(p, xs[i], xs[j])).collect();
            if let Some((y1, y2)) = min_stab(&sets) {
                let d = w.hypot(y2 - y1);
                if d < best.1 {
                    best = ([xs[i], xs[j], y1, y2], d);
                }
            }
        }
    }
    best
}

fn meets_boundary(poly: &[(f64, f64)], r: &Rect) -> bool {
    let [x1, x2, y1, y2] = *r;
    let strictly_inside = poly.iter().all(|p| p.0 > x1 && p.0 < x2 && p.1 > y1 && p.1 < y2);
    if strictly_inside {
        return false;
    }
    let touches = poly.iter().any(|p| p.0 >= x1 && p.0 <= x2 && p.1 >= y1 && p.1 <= y2);
    let corners = [(x1, y1), (x2, y1), (x2, y2), (x1, y2)];
    touches || segs_cross(poly, r) || corners.iter().any(|&c| point_in_polygon(poly, c))
}

fn segs_cross(poly: &[(f64, f64)], r: &Rect) -> bool {
    let [x1, x2, y1, y2] = *r;
    let n = poly.len();
    (0..n).any(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let xs = [x1, x2];
        let ys = [y1, y2];
        xs.iter().any(|&x| (a.0 - x) * (b.0 - x) <= 0.0 && a.0 != b.0 && {
            let y = a.1 + (x - a.0) * (b.1 - a.1) / (b.0 - a.0);
            y1 <= y && y <= y2
        }) || ys.iter().any(|&y| (a.1 - y) * (b.1 - y) <= 0.0 && a.1 != b.1 && {
            let x = a.0 + (y - a.1) * (b.0 - a.0) / (b.1 - a.1);
            x1 <= x && x <= x2
        })
    })
}

fn centred(c: (f64, f64), side: f64) -> Rect {
    [c.0 - side / 2.0, c.0 + side / 2.0, c.1 - side / 2.0, c.1 + side / 2.0]
}

fn diameter(poly: &[(f64, f64)]) -> f64 {
    let mut d: f64 = 0.0;
    for a in poly {
        for b in poly {
            d = d.max((a.0 - b.0).hypot(a.1 - b.1));
        }
    }
    d
}

/// Candidate windows of side `c * 2 sqrt(2) diam(R0)` that contain an optimal tour.
pub fn localization_candidates(inst: &Instance, resolution: f64, c: f64) -> LocalizationReport {
    let polys: Vec<Vec<(f64, f64)>> = inst.regions.iter().map(region_polygon_f64).collect();
    let (r0, diam) = minimum_rectangle(&polys, resolution);
    let all_meet = polys.iter().all(|p| meets_boundary(p, &r0));
    let l_star_bounds = all_meet.then_some([2.0 * diam, 2.0 * 2f64.sqrt() * diam]);
    let side = c * 2.0 * 2f64.sqrt() * diam.max(resolution);
    let smallest = polys.iter().enumerate().min_by(|a, b| diameter(a.1).total_cmp(&diameter(b.1))).map(|(i, _)| i);
    let mut candidates = Vec::new();
    if diam == 0.0 {
        candidates.push(centred((r0[0], r0[2]), side));
    } else if let Some(i) = smallest.filter(|&i| diameter(&polys[i]) <= diam) {
        let p = &polys[i];
        let cx = p.iter().map(|v| v.0).sum::<f64>() / p.len() as f64;
        let cy = p.iter().map(|v| v.1).sum::<f64>() / p.len() as f64;
        candidates.push(centred((cx, cy), side + 2.0 * diameter(p)));
    } else {
        for p in &polys {
            for &v in p {
                candidates.push(centred(v, side));
            }
        }
    }
    LocalizationReport { r0, diam_r0: diam, resolution, l_star_bounds, candidates }
}

/// Samples of the boundary of `poly ∩ B(c, rho)` with spacing at most `h`.
pub(crate) fn ball_clipped_samples(poly: &[(f64, f64)], c: (f64, f64), rho: f64, h: f64) -> SampleSet {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let inside = |p: (f64, f64)| (p.0 - c.0).hypot(p.1 - c.1) <= rho;
    let n = poly.len();
    let mut crossings: Vec<f64> = Vec::new();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        // Solve |a + t (b - a) - c| = rho.
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let (fx, fy) = (a.0 - c.0, a.1 - c.1);
        let qa = dx * dx + dy * dy;
        let qb = 2.0 * (fx * dx + fy * dy);
        let qc = fx * fx + fy * fy - rho * rho;
        let disc = qb * qb - 4.0 * qa * qc;
        let mut ts = vec![0.0, 1.0];
        if disc >= 0.0 {
            for t in [(-qb - disc.sqrt()) / (2.0 * qa), (-qb + disc.sqrt()) / (2.0 * qa)] {
                if (0.0..=1.0).contains(&t) {
                    ts.push(t);
                    crossings.push((a.1 + t * dy - c.1).atan2(a.0 + t * dx - c.0));
                }
            }
        }
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            let mid = (a.0 + 0.5 * (w[0] + w[1]) * dx, a.1 + 0.5 * (w[0] + w[1]) * dy);
            if !inside(mid) {
                continue;
            }
            let len = (w[1] - w[0]) * qa.sqrt();
            let k = ((len / h).ceil() as usize).max(1);
            for j in 0..=k {
                let t = w[0] + (w[1] - w[0]) * j as f64 / k as f64;
                pts.push((a.0 + t * dx, a.1 + t * dy));
            }
        }
    }
    crossings.sort_by(f64::total_cmp);
    if crossings.is_empty() {
        crossings.push(0.0);
    }
    let m = crossings.len();
    for i in 0..m {
        let a0 = crossings[i];
        let a1 = if i + 1 < m { crossings[i + 1] } else { crossings[0] + 2.0 * std::f64::consts::PI };
        let mid = 0.5 * (a0 + a1);
        if !point_in_polygon(poly, (c.0 + rho * mid.cos(), c.1 + rho * mid.sin())) {
            continue;
        }
        let k = (((a1 - a0) * rho / h).ceil() as usize).max(1);
        for j in 0..=k {
            let t = a0 + (a1 - a0) * j as f64 / k as f64;
            pts.push((c.0 + rho * t.cos(), c.1 + rho * t.sin()));
        }
    }
    SampleSet::from_coords(pts, h / 2.0 + 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{pt, q, Polygon};

    fn sq(x0: i64, y0: i64, s: i64) -> Polygon {
        Polygon::new(vec![pt(x0, y0), pt(x0 + s, y0), pt(x0 + s, y0 + s), pt(x0, y0 + s)]).unwrap()
    }

    #[test]
    fn common_point_gives_degenerate_rectangle() {
        // Three triangles sharing no point but all touching a tiny neighbourhood of (5,5).
        let polys = vec![
            vec![(5.0, 5.0), (4.0, 3.0), (6.0, 3.0)],
            vec![(5.0, 5.0), (7.0, 6.0), (7.0, 4.0)],
            vec![(5.0, 5.0), (4.0, 7.0), (3.0, 5.5)],
        ];
        let (r, d) = minimum_rectangle(&polys, 0.25);
        assert!(d < 1e-9, "{r:?} {d}");
    }

    #[test]
    fn four_corner_squares() {
        let inst = Instance::polygons(vec![sq(0, 0, 1), sq(3, 0, 1), sq(0, 3, 1), sq(3, 3, 1)], q(4, 1), q(1, 3)).unwrap();
        let rep = localization_candidates(&inst, 0.25, 1.0);
        assert!((rep.diam_r0 - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        let b = rep.l_star_bounds.expect("all squares touch R0");
        assert!(b[0] <= 8.0 && 8.0 <= b[1] + 1e-9);
        assert!(rep.candidates.len() <= 16 + 1);
    }

    #[test]
    fn clipped_samples_cover_quarter_disk() {
        let poly = vec![(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)];
        let s = ball_clipped_samples(&poly, (0.0, 0.0), 2.0, 0.1);
        for p in &s.coords {
            assert!(p.0 >= -1e-9 && p.1 >= -1e-9 && p.0.hypot(p.1) <= 2.0 + 1e-9);
        }
        // Arc endpoint and the corner are both sampled.
        assert!(s.coords.iter().any(|p| (p.0 - 2.0).abs() < 1e-9 && p.1.abs() < 1e-9));
        assert!(s.coords.iter().any(|p| p.0.abs() < 1e-12 && p.1.abs() < 1e-12));
    }
}
