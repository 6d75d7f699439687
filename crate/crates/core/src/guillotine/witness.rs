//! Charging witnesses: the segments whose orthogonal projections make a
//! cut dark, taken nearest-first on each side.

use num_traits::Zero;

use super::ledger::Direction;
use crate::geom::{intersect_segments, qi, Cut, Orientation, Segment, SegmentIntersection, Q};

/// Portion `[t0, t1]` (segment parameters) of item `key` charged from `direction`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub key: usize,
    pub side: usize,
    pub t0: Q,
    pub t1: Q,
    pub direction: Direction,
    pub length: f64,
}

/// A segment that can serve as a witness, tagged with its owner.
#[derive(Clone, Debug)]
pub struct Item {
    pub key: usize,
    pub side: usize,
    pub segment: Segment,
    /// Lower wins when several items cross at one position.
    pub priority: u8,
}

struct Crossing<'a> {
    item: &'a Item,
    across: Q,
}

fn along_span(cut: &Cut, s: &Segment) -> (Q, Q) {
    (cut.along(&s.a).clone(), cut.along(&s.b).clone())
}

/// Parameter on `s` at along-coordinate `t` (the along coordinates must differ).
fn param_at(cut: &Cut, s: &Segment, t: &Q) -> Q {
    let (a0, a1) = along_span(cut, s);
    (t - &a0) / (a1 - a0)
}

fn across_at(cut: &Cut, s: &Segment, t: &Q) -> Q {
    let u = param_at(cut, s, t);
    let c0 = cut.across(&s.a);
    let c1 = cut.across(&s.b);
    c0 + u * (c1 - c0)
}

/// Along-coordinates where `s` crosses the across-coordinate `c`.
fn along_where(cut: &Cut, s: &Segment, c: &Q) -> Option<Q> {
    let c0 = cut.across(&s.a);
    let c1 = cut.across(&s.b);
    if c0 == c1 {
        return None;
    }
    let u = (c - c0) / (c1 - c0);
    if u < Q::zero() || u > qi(1) {
        return None;
    }
    let (a0, a1) = along_span(cut, s);
    Some(&a0 + u * (a1 - &a0))
}

fn breakpoints(cut: &Cut, items: &[Item], pairwise: bool) -> Vec<Q> {
    let (wlo, whi) = cut.window.across_range(cut.orientation);
    let mut out = Vec::new();
    for it in items {
        let (a0, a1) = along_span(cut, &it.segment);
        out.push(a0);
        out.push(a1);
        for c in [&cut.coord, wlo, whi] {
            out.extend(along_where(cut, &it.segment, c));
        }
    }
    if pairwise {
        for i in 0..items.len() {
            for j in (i + 1)..items.len() {
                if let SegmentIntersection::Point(p) = intersect_segments(&items[i].segment, &items[j].segment) {
                    out.push(cut.along(&p).clone());
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Nearest-first witnesses over the dark intervals `dark` of `cut`.
///
/// On each side of the cut, positions are visited outward from the cut and
/// `per_side` of them are charged; items crossing at one position share it
/// and only the one with the lowest priority is charged.
pub fn witnesses(cut: &Cut, items: &[Item], dark: &[Segment], per_side: usize, pairwise: bool) -> Vec<Witness> {
    let items: Vec<Item> = items
        .iter()
        .filter(|it| {
            let (a0, a1) = along_span(cut, &it.segment);
            a0 != a1
        })
        .cloned()
        .collect();
    let bps = breakpoints(cut, &items, pairwise);
    let (wlo, whi) = cut.window.across_range(cut.orientation);
    let mut out = Vec::new();
    for d in dark {
        let (mut lo, mut hi) = along_span(cut, d);
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        let mut ts = vec![lo.clone()];
        ts.extend(bps.iter().filter(|t| *t > &lo && *t < &hi).cloned());
        ts.push(hi.clone());
        for w in ts.windows(2) {
            let (t0, t1) = (&w[0], &w[1]);
            let mid = (t0 + t1) / qi(2);
            let mut low: Vec<Crossing> = Vec::new();
            let mut high: Vec<Crossing> = Vec::new();
            for it in &items {
                let (a0, a1) = along_span(cut, &it.segment);
                let (amin, amax) = if a0 < a1 { (a0, a1) } else { (a1, a0) };
                if !(amin < mid && mid < amax) {
                    continue;
                }
                let across = across_at(cut, &it.segment, &mid);
                if &across <= wlo || &across >= whi || across == cut.coord {
                    continue;
                }
                if across < cut.coord {
                    low.push(Crossing { item: it, across });
                } else {
                    high.push(Crossing { item: it, across });
                }
            }
            // nearest first; ties by priority then key
            low.sort_by(|a, b| b.across.cmp(&a.across).then(a.item.priority.cmp(&b.item.priority)).then(a.item.key.cmp(&b.item.key)));
            high.sort_by(|a, b| a.across.cmp(&b.across).then(a.item.priority.cmp(&b.item.priority)).then(a.item.key.cmp(&b.item.key)));
            let (dlow, dhigh) = match cut.orientation {
                Orientation::Vertical => (Direction::Right, Direction::Left),
                Orientation::Horizontal => (Direction::Up, Direction::Down),
            };
            for (list, dir) in [(low, dlow), (high, dhigh)] {
                let mut taken = 0;
                let mut last: Option<Q> = None;
                for c in list {
                    if last.as_ref() == Some(&c.across) {
                        continue;
                    }
                    if taken == per_side {
                        break;
                    }
                    taken += 1;
                    last = Some(c.across.clone());
                    let s = &c.item.segment;
                    let (p0, p1) = (param_at(cut, s, t0), param_at(cut, s, t1));
                    let (p0, p1) = if p0 <= p1 { (p0, p1) } else { (p1, p0) };
                    let length = crate::geom::to_f64(&(&p1 - &p0)) * s.length();
                    out.push(Witness { key: c.item.key, side: c.item.side, t0: p0, t1: p1, direction: dir, length });
                }
            }
        }
    }
    out
}
