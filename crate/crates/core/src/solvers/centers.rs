use crate::geom::{to_f64, Q};
use crate::instance::Instance;

use super::Tour;

const HELD_KARP_MAX: usize = 15;

/// Additive slack of the centres tour over the TSPN optimum: `2k(1+eps)`.
pub fn centers_additive_bound(k: usize, eps: &Q) -> f64 {
    2.0 * k as f64 * (1.0 + to_f64(eps))
}

/// Tour through the region anchors (disk centres).
///
/// Exact Held-Karp up to 15 regions. Larger inputs use nearest neighbour
/// followed by 2-opt, which carries no ratio guarantee.
pub fn centers_heuristic(inst: &Instance, _eps: &Q) -> Tour {
    let centers = inst.centers();
    let pts: Vec<(f64, f64)> = centers.iter().map(|p| p.to_f64()).collect();
    let order = if pts.len() <= HELD_KARP_MAX { held_karp(&pts) } else { two_opt(&pts, nearest_neighbour(&pts)) };
    let points = order.iter().map(|&i| centers[i].clone()).collect();
    Tour::from_points(order, points)
}

fn d(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

pub(crate) fn held_karp(pts: &[(f64, f64)]) -> Vec<usize> {
    let n = pts.len();
    if n <= 3 {
        return (0..n).collect();
    }
    // Region 0 fixed as start; masks over the remaining n-1 regions.
    let m = n - 1;
    let full = 1usize << m;
    let mut cost = vec![f64::INFINITY; full * m];
    let mut parent = vec![usize::MAX; full * m];
    for j in 0..m {
        cost[(1 << j) * m + j] = d(pts[0], pts[j + 1]);
    }
    for mask in 1..full {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let cur = cost[mask * m + j];
            if !cur.is_finite() {
                continue;
            }
            for t in 0..m {
                if mask & (1 << t) != 0 {
                    continue;
                }
                let nm = mask | (1 << t);
                let c = cur + d(pts[j + 1], pts[t + 1]);
                if c < cost[nm * m + t] {
                    cost[nm * m + t] = c;
                    parent[nm * m + t] = j;
                }
            }
        }
    }
    let last_mask = full - 1;
    let mut best = (f64::INFINITY, 0);
    for j in 0..m {
        let c = cost[last_mask * m + j] + d(pts[j + 1], pts[0]);
        if c < best.0 {
            best = (c, j);
        }
    }
    let mut order = Vec::with_capacity(n);
    let (mut mask, mut j) = (last_mask, best.1);
    while j != usize::MAX {
        order.push(j + 1);
        let p = parent[mask * m + j];
        mask &= !(1 << j);
        j = p;
    }
    order.push(0);
    order.reverse();
    order
}

pub(crate) fn nearest_neighbour(pts: &[(f64, f64)]) -> Vec<usize> {
    let n = pts.len();
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    if n == 0 {
        return order;
    }
    let mut cur = 0;
    used[0] = true;
    order.push(0);
    for _ in 1..n {
        let next = (0..n).filter(|&j| !used[j]).min_by(|&a, &b| d(pts[cur], pts[a]).total_cmp(&d(pts[cur], pts[b]))).unwrap();
        used[next] = true;
        order.push(next);
        cur = next;
    }
    order
}

pub(crate) fn two_opt(pts: &[(f64, f64)], mut order: Vec<usize>) -> Vec<usize> {
    let n = order.len();
    if n < 4 {
        return order;
    }
    loop {
        let mut improved = false;
        for i in 0..n - 1 {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (pts[order[i]], pts[order[i + 1]]);
                let (c, e) = (pts[order[j]], pts[order[(j + 1) % n]]);
                if d(a, c) + d(b, e) < d(a, b) + d(c, e) - 1e-12 {
                    order[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            return order;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{pt, q};
    use crate::instance::Instance;
    use rand::{Rng, SeedableRng};

    fn cycle_length(pts: &[(f64, f64)], order: &[usize]) -> f64 {
        let n = order.len();
        if n < 2 {
            return 0.0;
        }
        (0..n).map(|i| d(pts[order[i]], pts[order[(i + 1) % n]])).sum()
    }

    #[test]
    fn equilateral_triangle_centres() {
        let h = 5.0 * 3f64.sqrt();
        let c = vec![pt(0, 0), pt(10, 0), crate::geom::Point::new(crate::geom::qi(5), Q::from_float(h).unwrap())];
        let inst = Instance::unit_disks(c, q(1, 3)).unwrap();
        let t = centers_heuristic(&inst, &q(1, 3));
        assert!((t.length - 30.0).abs() < 1e-9);
    }

    #[test]
    fn collinear_pair() {
        let inst = Instance::unit_disks(vec![pt(0, 0), pt(10, 0)], q(1, 3)).unwrap();
        let t = centers_heuristic(&inst, &q(1, 3));
        assert!((t.length - 20.0).abs() < 1e-12);
        assert!(t.length - 16.0 <= centers_additive_bound(2, &q(1, 3)));
    }

    #[test]
    fn held_karp_beats_two_opt_on_fifteen() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(15);
        for _ in 0..5 {
            let pts: Vec<(f64, f64)> = (0..15).map(|_| (rng.gen_range(0.0..50.0), rng.gen_range(0.0..50.0))).collect();
            let exact = cycle_length(&pts, &held_karp(&pts));
            let heur = cycle_length(&pts, &two_opt(&pts, nearest_neighbour(&pts)));
            assert!(exact <= heur + 1e-9);
        }
    }

    #[test]
    fn held_karp_matches_permutation_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<(f64, f64)> = (0..7).map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
        let mut best = f64::INFINITY;
        let mut perm: Vec<usize> = (1..7).collect();
        permute(&mut perm, 0, &mut |p| {
            let mut o = vec![0];
            o.extend_from_slice(p);
            best = best.min(cycle_length(&pts, &o));
        });
        assert!((cycle_length(&pts, &held_karp(&pts)) - best).abs() < 1e-9);
    }

    fn permute(v: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
        if i == v.len() {
            f(v);
            return;
        }
        for j in i..v.len() {
            v.swap(i, j);
            permute(v, i + 1, f);
            v.swap(i, j);
        }
    }
}
