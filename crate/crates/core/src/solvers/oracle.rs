//! Brute-force TSPN reference solver over sampled boundary points.
//!
//! Gap argument: an optimal tour for k >= 2 touches every region on its
//! boundary. Moving each touch point to the nearest sample moves it by at
//! most the set's covering radius r_i, which lengthens the tour by at most
//! 2 r_i. Hence `sampled - 2 * sum(r_i) <= optimum <= sampled`.

use std::f64::consts::PI;

use super::Tour;
use crate::geom::{q, Point, Q};
use crate::instance::{Instance, Region};

pub const MAX_ORACLE_REGIONS: usize = 9;

#[derive(Clone, Debug)]
pub struct SampleSet {
    pub points: Vec<Point>,
    pub coords: Vec<(f64, f64)>,
    /// Every candidate touch point lies within this distance of a sample.
    pub radius: f64,
}

impl SampleSet {
    pub fn new(points: Vec<Point>, radius: f64) -> Self {
        let coords = points.iter().map(|p| p.to_f64()).collect();
        SampleSet { points, coords, radius }
    }

    /// Samples given only as floats (used where exact touch points are not needed).
    pub fn from_coords(coords: Vec<(f64, f64)>, radius: f64) -> Self {
        let points = coords.iter().map(|&(x, y)| Point::new(Q::from_float(x).unwrap(), Q::from_float(y).unwrap())).collect();
        SampleSet { points, coords, radius }
    }

    fn every(&self, stride: usize) -> SampleSet {
        let points: Vec<Point> = self.points.iter().step_by(stride).cloned().collect();
        SampleSet::new(points, 0.0).with_arc_radius()
    }

    fn with_arc_radius(mut self) -> Self {
        self.radius = arc_covering_radius(&self.coords);
        self
    }
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub disk_samples: usize,
    pub polygon_spacing: Q,
    pub threads: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { disk_samples: 128, polygon_spacing: q(1, 8), threads: super::default_threads() }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct OracleResult {
    pub tour: Tour,
    /// `tour.length - gap` is a lower bound on the optimum.
    pub gap: f64,
    pub orders_total: usize,
    pub orders_refined: usize,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("brute-force oracle supports at most {MAX_ORACLE_REGIONS} regions, got {0}")]
    TooManyRegions(usize),
    #[error("region {0} produced no samples")]
    EmptySamples(usize),
}

#[derive(Clone, Debug)]
pub struct SampledTour {
    pub order: Vec<usize>,
    /// Sample index (in the finest level) chosen for `order[i]`.
    pub choice: Vec<usize>,
    pub length: f64,
    pub gap: f64,
    pub orders_total: usize,
    pub orders_refined: usize,
}

/// Unit-circle point for angle `theta`, exactly on the circle via the
/// rational parametrisation `((1-t^2)/(1+t^2), 2t/(1+t^2))`.
fn rational_circle_point(theta: f64) -> (Q, Q) {
    let mut th = theta.rem_euclid(2.0 * PI);
    if th > PI {
        th -= 2.0 * PI;
    }
    if (th - PI).abs() < 1e-15 {
        return (q(-1, 1), q(0, 1));
    }
    let scale = 1i64 << 24;
    let t = q(((th / 2.0).tan() * scale as f64).round() as i64, scale);
    let one = q(1, 1);
    let den = &one + &t * &t;
    ((&one - &t * &t) / &den, (q(2, 1) * &t) / den)
}

/// Largest distance from a point of the circle to the nearest sample,
/// computed from the actual sample angles.
fn arc_covering_radius(coords: &[(f64, f64)]) -> f64 {
    if coords.len() < 2 {
        return 2.0;
    }
    let c = centroid(coords);
    let mut ang: Vec<f64> = coords.iter().map(|p| (p.1 - c.1).atan2(p.0 - c.0)).collect();
    ang.sort_by(f64::total_cmp);
    let mut worst: f64 = 0.0;
    for i in 0..ang.len() {
        let next = if i + 1 < ang.len() { ang[i + 1] } else { ang[0] + 2.0 * PI };
        worst = worst.max(next - ang[i]);
    }
    2.0 * (worst / 4.0).sin() + 1e-12
}

fn centroid(coords: &[(f64, f64)]) -> (f64, f64) {
    let n = coords.len() as f64;
    (coords.iter().map(|p| p.0).sum::<f64>() / n, coords.iter().map(|p| p.1).sum::<f64>() / n)
}

pub fn disk_samples(center: &Point, n: usize) -> SampleSet {
    let points = (0..n)
        .map(|j| {
            let (cx, sy) = rational_circle_point(2.0 * PI * j as f64 / n as f64);
            Point::new(&center.x + cx, &center.y + sy)
        })
        .collect();
    SampleSet::new(points, 0.0).with_arc_radius()
}

/// Boundary samples at exact rational parameters, spacing at most `h` per edge.
pub fn polygon_samples(poly: &crate::geom::Polygon, h: &Q) -> SampleSet {
    let mut points = Vec::new();
    let mut radius: f64 = 0.0;
    let hf = crate::geom::to_f64(h);
    for e in poly.edges() {
        let len = e.length();
        let n = ((len / hf).ceil() as i64).max(1);
        radius = radius.max(len / (2.0 * n as f64));
        for i in 0..n {
            points.push(e.point_at(&q(i, n)));
        }
    }
    SampleSet::new(points, radius + 1e-12)
}

fn sample_levels(inst: &Instance, opts: &OracleOptions) -> Vec<Vec<SampleSet>> {
    let finest: Vec<SampleSet> = inst
        .regions
        .iter()
        .map(|r| match r {
            Region::Disk(c) => disk_samples(c, opts.disk_samples),
            Region::Polygon(p) => polygon_samples(p, &opts.polygon_spacing),
        })
        .collect();
    let mut levels = Vec::new();
    for stride in [8usize, 4, 2] {
        let lvl: Vec<SampleSet> = inst
            .regions
            .iter()
            .zip(&finest)
            .map(|(r, f)| match r {
                Region::Disk(_) if opts.disk_samples % stride == 0 && opts.disk_samples / stride >= 8 => f.every(stride),
                Region::Disk(_) => f.clone(),
                Region::Polygon(p) => polygon_samples(p, &(&opts.polygon_spacing * Q::from_integer((stride as i64).into()))),
            })
            .collect();
        levels.push(lvl);
    }
    levels.push(finest);
    levels
}

pub fn brute_force_oracle(inst: &Instance, opts: &OracleOptions) -> Result<OracleResult, OracleError> {
    let k = inst.k();
    if k > MAX_ORACLE_REGIONS {
        return Err(OracleError::TooManyRegions(k));
    }
    if k <= 1 {
        let points = inst.regions.first().map(|r| vec![r.anchor()]).unwrap_or_default();
        let order = (0..points.len()).collect();
        return Ok(OracleResult { tour: Tour::from_points(order, points), gap: 0.0, orders_total: 1, orders_refined: 0 });
    }
    let levels = sample_levels(inst, opts);
    let st = oracle_over_samples(&levels, opts.threads)?;
    let finest = levels.last().unwrap();
    let points = st.order.iter().zip(&st.choice).map(|(&r, &c)| finest[r].points[c].clone()).collect();
    let tour = Tour::from_points(st.order.clone(), points);
    Ok(OracleResult { tour, gap: st.gap, orders_total: st.orders_total, orders_refined: st.orders_refined })
}

fn canonical_orders(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rest: Vec<usize> = (1..k).collect();
    fn rec(rest: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == rest.len() {
            if rest.len() < 2 || rest[0] < rest[rest.len() - 1] {
                let mut o = vec![0];
                o.extend_from_slice(rest);
                out.push(o);
            }
            return;
        }
        for j in i..rest.len() {
            rest.swap(i, j);
            rec(rest, i + 1, out);
            rest.swap(i, j);
        }
    }
    rec(&mut rest, 0, &mut out);
    out.sort();
    out
}

#[inline]
fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (a.0 - b.0, a.1 - b.1);
    (dx * dx + dy * dy).sqrt()
}

/// Shortest closed polyline through one sample per region in this cyclic
/// order. Returns (length, choice per position) when `want_choice`.
fn eval_order(sets: &[SampleSet], order: &[usize], want_choice: bool) -> (f64, Vec<usize>) {
    let k = order.len();
    // Rotate so the smallest set is fixed as the start.
    let start = (0..k).min_by_key(|&i| sets[order[i]].coords.len()).unwrap();
    let rot: Vec<usize> = (0..k).map(|i| order[(start + i) % k]).collect();
    let first = &sets[rot[0]].coords;
    let mut best = (f64::INFINITY, 0usize);
    let mut cur: Vec<f64> = Vec::new();
    let mut nxt: Vec<f64> = Vec::new();
    for (s0, &p0) in first.iter().enumerate() {
        let c1 = &sets[rot[1]].coords;
        cur.clear();
        cur.extend(c1.iter().map(|&p| dist(p0, p)));
        for w in 1..k - 1 {
            let a = &sets[rot[w]].coords;
            let b = &sets[rot[w + 1]].coords;
            nxt.clear();
            for &pb in b {
                let mut m = f64::INFINITY;
                for (ia, &pa) in a.iter().enumerate() {
                    let v = cur[ia] + dist(pa, pb);
                    if v < m {
                        m = v;
                    }
                }
                nxt.push(m);
            }
            std::mem::swap(&mut cur, &mut nxt);
        }
        let last = &sets[rot[k - 1]].coords;
        let close = last.iter().enumerate().map(|(i, &p)| cur[i] + dist(p, p0)).fold(f64::INFINITY, f64::min);
        if close < best.0 {
            best = (close, s0);
        }
    }
    if !want_choice {
        return (best.0, Vec::new());
    }
    // Re-run from the best start keeping parents.
    let p0 = first[best.1];
    let mut parents: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<f64> = sets[rot[1]].coords.iter().map(|&p| dist(p0, p)).collect();
    for w in 1..k - 1 {
        let a = &sets[rot[w]].coords;
        let b = &sets[rot[w + 1]].coords;
        let mut nxt = Vec::with_capacity(b.len());
        let mut par = Vec::with_capacity(b.len());
        for &pb in b {
            let (mut m, mut arg) = (f64::INFINITY, 0);
            for (ia, &pa) in a.iter().enumerate() {
                let v = cur[ia] + dist(pa, pb);
                if v < m {
                    m = v;
                    arg = ia;
                }
            }
            nxt.push(m);
            par.push(arg);
        }
        parents.push(par);
        cur = nxt;
    }
    let last = &sets[rot[k - 1]].coords;
    let mut end = (f64::INFINITY, 0);
    for (i, &p) in last.iter().enumerate() {
        let v = cur[i] + dist(p, p0);
        if v < end.0 {
            end = (v, i);
        }
    }
    let mut rchoice = vec![0; k];
    rchoice[0] = best.1;
    rchoice[k - 1] = end.1;
    for w in (1..k - 1).rev() {
        rchoice[w] = parents[w - 1][rchoice[w + 1]];
    }
    let mut choice = vec![0; k];
    for i in 0..k {
        choice[(start + i) % k] = rchoice[i];
    }
    (end.0, choice)
}

fn eval_all(sets: &[SampleSet], orders: &[Vec<usize>], idx: &[usize], threads: usize) -> Vec<f64> {
    let threads = threads.max(1).min(idx.len().max(1));
    if threads == 1 {
        return idx.iter().map(|&i| eval_order(sets, &orders[i], false).0).collect();
    }
    let chunk = idx.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = idx
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(|&i| eval_order(sets, &orders[i], false).0).collect::<Vec<f64>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("oracle worker")).collect()
    })
}

/// Minimum over all tour orders of the sampled problem, refined level by
/// level. An order is dropped once its lower bound exceeds a known tour
/// length; the optimal order can never be dropped.
pub fn oracle_over_samples(levels: &[Vec<SampleSet>], threads: usize) -> Result<SampledTour, OracleError> {
    let finest = levels.last().expect("at least one level");
    let k = finest.len();
    for lvl in levels {
        if let Some(i) = lvl.iter().position(|s| s.coords.is_empty()) {
            return Err(OracleError::EmptySamples(i));
        }
    }
    if k == 1 {
        return Ok(SampledTour { order: vec![0], choice: vec![0], length: 0.0, gap: 0.0, orders_total: 1, orders_refined: 0 });
    }
    let orders = canonical_orders(k);
    let mut alive: Vec<usize> = (0..orders.len()).collect();
    let mut upper = f64::INFINITY;
    let mut vals = Vec::new();
    for lvl in levels {
        let gap = 2.0 * lvl.iter().map(|s| s.radius).sum::<f64>();
        vals = eval_all(lvl, &orders, &alive, threads);
        for &v in &vals {
            upper = upper.min(v);
        }
        let keep: Vec<(usize, f64)> =
            alive.iter().zip(&vals).filter(|(_, &v)| v - gap <= upper + 1e-9).map(|(&i, &v)| (i, v)).collect();
        alive = keep.iter().map(|p| p.0).collect();
        vals = keep.iter().map(|p| p.1).collect();
    }
    let (pos, _) = vals.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    let order = orders[alive[pos]].clone();
    let (length, choice) = eval_order(finest, &order, true);
    let gap = 2.0 * finest.iter().map(|s| s.radius).sum::<f64>();
    let refined = alive.len();
    Ok(SampledTour { order, choice, length, gap, orders_total: orders.len(), orders_refined: refined })
}

#[cfg(test)]
mod tests;
