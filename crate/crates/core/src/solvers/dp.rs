//! Desk-scale dynamic program over grid-rounded tours.
//!
//! Vertices are grid points of the Γ-hulls; a segment between two of them
//! visits every hull it meets. Held–Karp runs over (visited hulls, current
//! vertex) from every start vertex, so the optimum is exact over closed
//! grid polylines whose vertices lie in Γ-hulls. The result is then
//! certified guillotine at `(m+1, M+24)` under the both-sides definition;
//! a graph that fails is refused, never altered.

use serde::Serialize;

use super::Tour;
use crate::geom::{compare_lengths, Point, Segment, Window};
use crate::grid::grid_check_options;
use crate::guillotine::{check_guillotine, CheckError, CheckOutcome, EdgeSet, GuillotineCertificate};
use crate::instance::{gamma_points, RoundedInstance};

/// Bound on `2^k · P³` (P = total Γ grid points): layers times starts.
pub const DP_WORK_LIMIT: u128 = 4_000_000_000;
pub const DP_MAX_REGIONS: usize = 8;
/// Region offset of the certified region-goodness.
pub const DP_REGION_OFFSET: usize = 24;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DpError {
    #[error("state space too large: k = {k}, {points} grid points, work {work} above {limit}")]
    TooLarge { k: usize, points: usize, work: u128, limit: u128 },
    #[error("instance has no regions")]
    Empty,
    #[error("optimal graph is not guillotine; refused window {0:?}")]
    NotGuillotine(Window),
    #[error(transparent)]
    Check(#[from] CheckError),
}

#[derive(Clone, Debug, Serialize)]
pub struct DpResult {
    pub edges: EdgeSet,
    pub tour: Tour,
    pub length: f64,
    pub points: usize,
    pub states: u128,
    pub certificate: GuillotineCertificate,
}

struct Table {
    pts: Vec<Point>,
    owner: Vec<usize>,
    dist: Vec<f64>,
    /// Hulls met by the segment between two vertices.
    visits: Vec<u32>,
}

impl Table {
    fn new(rounded: &RoundedInstance) -> Self {
        let mut pts = Vec::new();
        let mut owner = Vec::new();
        for (i, h) in rounded.gamma_hulls.iter().enumerate() {
            for p in gamma_points(h, &rounded.grid) {
                pts.push(p);
                owner.push(i);
            }
        }
        let n = pts.len();
        let mut dist = vec![0.0; n * n];
        let mut visits = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let s = Segment::new(pts[a].clone(), pts[b].clone());
                let mut mask = 0u32;
                for (i, h) in rounded.gamma_hulls.iter().enumerate() {
                    if h.meets_segment(&s) {
                        mask |= 1 << i;
                    }
                }
                let d = pts[a].dist(&pts[b]);
                dist[a * n + b] = d;
                dist[b * n + a] = d;
                visits[a * n + b] = mask;
                visits[b * n + a] = mask;
            }
        }
        Table { pts, owner, dist, visits }
    }

    fn n(&self) -> usize {
        self.pts.len()
    }
}

/// Best closed walk starting and ending at `s`: (length, vertex sequence).
fn from_start(t: &Table, full: u32, s: usize) -> Option<(f64, Vec<usize>)> {
    let n = t.n();
    let states = (full as usize + 1) * n;
    let mut best = vec![f64::INFINITY; states];
    let mut prev = vec![usize::MAX; states];
    let start = t.visits[s * n + s];
    best[start as usize * n + s] = 0.0;
    let mut answer: Option<(f64, usize)> = None;
    let mut done = vec![false; n];
    // masks only grow; within one mask, a dense Dijkstra settles the layer
    for mask in 0..=full {
        let base = mask as usize * n;
        done.iter_mut().for_each(|d| *d = false);
        loop {
            let mut v = usize::MAX;
            for u in 0..n {
                if !done[u] && best[base + u].is_finite() && (v == usize::MAX || best[base + u] < best[base + v]) {
                    v = u;
                }
            }
            if v == usize::MAX {
                break;
            }
            done[v] = true;
            let here = best[base + v];
            if mask | t.visits[v * n + s] == full {
                let total = here + t.dist[v * n + s];
                if answer.is_none_or(|(b, _)| total < b) {
                    answer = Some((total, base + v));
                }
            }
            for w in 0..n {
                if w == v {
                    continue;
                }
                let next = mask | t.visits[v * n + w];
                let idx = next as usize * n + w;
                if next == mask && done[w] {
                    continue;
                }
                let cand = here + t.dist[v * n + w];
                if cand < best[idx] {
                    best[idx] = cand;
                    prev[idx] = base + v;
                }
            }
        }
    }
    let (len, mut idx) = answer?;
    let mut seq = Vec::new();
    loop {
        seq.push(idx % n);
        let p = prev[idx];
        if p == usize::MAX {
            break;
        }
        idx = p;
    }
    seq.reverse();
    Some((len, seq))
}

/// Shortest connected Eulerian grid-rounded graph visiting every Γ-hull
/// among closed polylines on Γ grid points, certified guillotine.
pub fn dp_solve(rounded: &RoundedInstance, m: usize, big_m: usize, threads: usize) -> Result<DpResult, DpError> {
    let k = rounded.gamma_hulls.len();
    if k == 0 {
        return Err(DpError::Empty);
    }
    let points: usize = rounded.gamma_hulls.iter().map(|h| gamma_points(h, &rounded.grid).len()).sum();
    let work = (1u128 << k) * (points as u128).pow(3);
    if k > DP_MAX_REGIONS || work > DP_WORK_LIMIT {
        return Err(DpError::TooLarge { k, points, work, limit: DP_WORK_LIMIT });
    }
    let t = Table::new(rounded);
    let full: u32 = (1u32 << k) - 1;
    let starts: Vec<usize> = (0..t.n()).collect();
    let threads = threads.max(1).min(starts.len());
    let chunk = starts.len().div_ceil(threads);
    let results: Vec<Option<(f64, Vec<usize>)>> = std::thread::scope(|sc| {
        let handles: Vec<_> = starts
            .chunks(chunk)
            .map(|part| {
                let t = &t;
                sc.spawn(move || {
                    let mut best: Option<(f64, Vec<usize>)> = None;
                    for &s in part {
                        if let Some(c) = from_start(t, full, s) {
                            if best.as_ref().is_none_or(|b| c.0 < b.0) {
                                best = Some(c);
                            }
                        }
                    }
                    best
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("dp worker")).collect()
    });
    // deterministic: first chunk wins ties, chunks are in start order
    let (_, seq) = results
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("a single Γ point already closes a tour for k = 1");
    let vertices: Vec<Point> = seq.iter().map(|&i| t.pts[i].clone()).collect();
    let order: Vec<usize> = seq.iter().map(|&i| t.owner[i]).collect();
    let tour = Tour::from_points(order, vertices);
    let edges = EdgeSet::from_segments(tour.segments());
    let window = Window::bounding(t.pts.iter()).expect("nonempty point set");
    let outcome = check_guillotine(
        &edges.plain(),
        &rounded.gamma_hulls,
        &window,
        &rounded.grid,
        m + 1,
        big_m + DP_REGION_OFFSET,
        &grid_check_options(),
    )?;
    let certificate = match outcome {
        CheckOutcome::Certified { certificate } => certificate,
        CheckOutcome::Refused { witness } => return Err(DpError::NotGuillotine(witness)),
    };
    let length = tour.length;
    Ok(DpResult { edges, tour, length, points, states: (1u128 << k) * points as u128, certificate })
}

/// Certified `a <= b` on total lengths; ties resolved only when provable.
pub fn certified_le(a: &[Segment], b: &[Segment]) -> bool {
    matches!(compare_lengths(a, b), Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal))
}
