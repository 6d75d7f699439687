use super::*;
use crate::geom::{pt, q, qi, Point};
use crate::instance::Instance;
use rand::{Rng, SeedableRng};

fn opts() -> OracleOptions {
    OracleOptions { threads: 2, ..OracleOptions::default() }
}

#[test]
fn two_collinear_disks() {
    let inst = Instance::unit_disks(vec![pt(0, 0), pt(10, 0)], q(1, 3)).unwrap();
    let r = brute_force_oracle(&inst, &opts()).unwrap();
    // Samples at angle 0 and pi are exact, so the sampled optimum is exact.
    assert!((r.tour.length - 16.0).abs() < 1e-9, "{}", r.tour.length);
    assert!(r.gap > 0.0 && r.gap <= 2.0 * 2.0 * PI / 128.0 + 1e-9);
}

#[test]
fn equilateral_triangle() {
    let h = Q::from_float(5.0 * 3f64.sqrt()).unwrap();
    let inst = Instance::unit_disks(vec![pt(0, 0), pt(10, 0), Point::new(qi(5), h)], q(1, 3)).unwrap();
    let r = brute_force_oracle(&inst, &opts()).unwrap();
    let expect = 3.0 * (10.0 - 3f64.sqrt());
    assert!((expect - 24.804).abs() < 1e-3);
    assert!(r.tour.length >= expect - 1e-6);
    assert!(r.tour.length - r.gap <= expect);
}

#[test]
fn single_disk_is_degenerate() {
    let inst = Instance::unit_disks(vec![pt(3, 4)], q(1, 3)).unwrap();
    let r = brute_force_oracle(&inst, &opts()).unwrap();
    assert_eq!(r.tour.length, 0.0);
    assert_eq!(r.gap, 0.0);
}

#[test]
fn refuses_ten_regions() {
    let c = (0..10).map(|i| pt(3 * i, 0)).collect();
    let inst = Instance::unit_disks(c, q(1, 3)).unwrap();
    assert_eq!(brute_force_oracle(&inst, &opts()).unwrap_err(), OracleError::TooManyRegions(10));
}

#[test]
fn order_enumeration_counts() {
    for (k, n) in [(2, 1), (3, 1), (4, 3), (5, 12), (6, 60)] {
        assert_eq!(canonical_orders(k).len(), n);
    }
}

#[test]
fn touch_points_lie_on_their_circles() {
    let inst = Instance::unit_disks(vec![pt(0, 0), pt(5, 1), pt(2, 6)], q(1, 3)).unwrap();
    let r = brute_force_oracle(&inst, &opts()).unwrap();
    for (&reg, p) in r.tour.order.iter().zip(&r.tour.points) {
        let c = inst.centers()[reg].clone();
        assert_eq!(c.dist_sq(p), qi(1));
    }
}

#[test]
fn pruned_search_matches_exhaustive_single_level() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let mut c: Vec<Point> = Vec::new();
        while c.len() < 5 {
            let p = pt(rng.gen_range(0..20), rng.gen_range(0..20));
            if c.iter().all(|o| o.dist_sq(&p) > qi(4)) {
                c.push(p);
            }
        }
        let sets: Vec<SampleSet> = c.iter().map(|p| disk_samples(p, 32)).collect();
        let pruned = oracle_over_samples(&[sets.iter().map(|s| s.every(4)).collect(), sets.clone()], 1).unwrap();
        let flat = oracle_over_samples(&[sets.clone()], 1).unwrap();
        let mut brute = f64::INFINITY;
        for o in canonical_orders(5) {
            brute = brute.min(eval_order(&sets, &o, false).0);
        }
        assert!((pruned.length - brute).abs() < 1e-9);
        assert!((flat.length - brute).abs() < 1e-9);
    }
}

#[test]
fn covering_radius_of_uniform_circle_samples() {
    let s = disk_samples(&pt(0, 0), 64);
    assert!(s.radius <= PI / 64.0 + 1e-6);
    assert!(s.radius >= 2.0 * (PI / 128.0).sin() - 1e-6);
}
