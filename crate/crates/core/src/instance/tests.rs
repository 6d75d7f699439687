use super::*;
use crate::geom::{pt, Polygon};
use crate::solvers::Tour;

fn disks(c: &[(i64, i64)]) -> Result<Instance, InstanceError> {
    Instance::unit_disks(c.iter().map(|&(x, y)| pt(x, y)).collect(), q(1, 3))
}

#[test]
fn load_two_disks() {
    let text = r#"{"kind":"unit_disks","epsilon":"1/3","disks":[{"center":["0","0"]},{"center":["10","0"]}]}"#;
    let inst = Instance::from_json(text).unwrap();
    assert_eq!(inst.k(), 2);
}

#[test]
fn overlap_names_pair() {
    let text = r#"{"kind":"unit_disks","epsilon":"1/3","disks":[{"center":["0","0"]},{"center":["1","0"]}]}"#;
    match Instance::from_json(text) {
        Err(InstanceError::Overlap(0, 1)) => {}
        other => panic!("{other:?}"),
    }
    // Touching disks share a point and are rejected too.
    assert!(matches!(disks(&[(0, 0), (2, 0)]), Err(InstanceError::Overlap(0, 1))));
}

#[test]
fn parse_error_has_line() {
    let text = "{\n\"kind\": \"unit_disks\",\n\"epsilon\": 0.3\n}";
    match Instance::from_json(text) {
        Err(InstanceError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    let text = r#"{"kind":"unit_disks","epsilon":"0.3","disks":[]}"#;
    assert!(matches!(Instance::from_json(text), Err(InstanceError::Rational(_))));
}

#[test]
fn round_trip_fifty_disks() {
    let inst = generate_random(50, 9, 60).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.json");
    save_instance(&inst, &path).unwrap();
    assert_eq!(load_instance(&path).unwrap(), inst);
}

#[test]
fn polygon_round_trip() {
    let a = Polygon::new(vec![pt(0, 0), pt(2, 0), pt(1, 2)]).unwrap();
    let b = Polygon::new(vec![pt(5, 0), pt(7, 0), pt(6, 2)]).unwrap();
    let inst = Instance::polygons(vec![a, b], q(4, 1), q(1, 4)).unwrap();
    assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
}

#[test]
fn random_is_deterministic_and_disjoint() {
    let a = generate_random(5, 1, 20).unwrap();
    let b = generate_random(5, 1, 20).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, generate_random(5, 2, 20).unwrap());
    a.validate().unwrap();
}

#[test]
fn random_budget_error() {
    assert!(matches!(generate_random(40, 1, 6), Err(GenerateError::Budget { .. })));
}

fn opts(demo: Option<Q>) -> GridOptions {
    GridOptions { demo_spacing: demo, allow_small: false }
}

fn line(k: i64) -> Instance {
    disks(&(0..k).map(|i| (3 * i, 0)).collect::<Vec<_>>()).unwrap()
}

#[test]
fn default_grid_parameters() {
    match derive_grid(&line(8), &opts(None)).unwrap() {
        GridOutcome::Grid { grid, square } => {
            assert_eq!(grid.spacing, q(1, 2304));
            assert_eq!(square.width(), qi(72));
            assert!(!grid.demo);
        }
        other => panic!("{other:?}"),
    }
    match derive_grid(&line(6), &opts(None)).unwrap() {
        GridOutcome::Grid { grid, square } => {
            assert_eq!(grid.spacing, q(1, 1296));
            assert_eq!(square.width(), qi(54));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn demo_spacing_is_flagged() {
    match derive_grid(&line(8), &opts(Some(q(1, 4)))).unwrap() {
        GridOutcome::Grid { grid, .. } => {
            assert_eq!(grid.spacing, q(1, 4));
            assert!(grid.demo);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn small_k_needs_flag() {
    assert!(derive_grid(&line(3), &opts(None)).is_err());
    let o = GridOptions { demo_spacing: None, allow_small: true };
    assert!(matches!(derive_grid(&line(3), &o).unwrap(), GridOutcome::Grid { .. }));
}

#[test]
fn spread_instance_is_not_localizable() {
    let inst = disks(&[(0, 0), (500, 0), (0, 3), (3, 0), (6, 0), (9, 0)]).unwrap();
    match derive_grid(&inst, &opts(None)).unwrap() {
        GridOutcome::NotLocalizable { side, fallback } => {
            assert_eq!(side, qi(54));
            let t: Tour = fallback;
            assert_eq!(t.order.len(), 6);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn coarse_rounding_gives_diamond() {
    let inst = Instance::unit_disks(vec![Point::new(q(3, 10), qi(0))], q(1, 3)).unwrap();
    let grid = GridSpec::new(pt(-5, -5), qi(1), (10, 10));
    let r = grid_round_instance(&inst, &grid).unwrap();
    assert_eq!(r.centers[0], pt(0, 0));
    let hull = &r.gamma_hulls[0];
    assert_eq!(hull.area2(), qi(4));
    let mut v = hull.vertices().to_vec();
    v.sort();
    assert_eq!(v, vec![pt(-1, 0), pt(0, -1), pt(0, 1), pt(1, 0)]);
}

#[test]
fn half_spacing_hull_contains_diamond_and_lies_in_disk() {
    let inst = Instance::unit_disks(vec![pt(2, 2)], q(1, 3)).unwrap();
    let grid = GridSpec::new(pt(0, 0), q(1, 2), (8, 8));
    let r = grid_round_instance(&inst, &grid).unwrap();
    let hull = &r.gamma_hulls[0];
    for p in [pt(3, 2), pt(1, 2), pt(2, 3), pt(2, 1)] {
        assert!(hull.contains(&p));
    }
    // Exhaustive check: a grid point is a hull point iff it lies in the disk.
    for i in 0..=8 {
        for j in 0..=8 {
            let p = Point::new(q(i, 2), q(j, 2));
            let in_disk = p.dist_sq(&pt(2, 2)) <= qi(1);
            assert_eq!(hull.contains(&p), in_disk, "{p:?}");
        }
    }
    for v in hull.vertices() {
        assert!(v.dist_sq(&pt(2, 2)) <= qi(1));
    }
}

#[test]
fn close_disks_keep_disjoint_hulls() {
    let inst = Instance::unit_disks(vec![pt(0, 0), Point::new(q(12, 5), qi(0))], q(1, 3)).unwrap();
    let grid = GridSpec::new(pt(-4, -4), q(1, 4), (40, 40));
    let r = grid_round_instance(&inst, &grid).unwrap();
    assert!(!r.gamma_hulls[0].intersects(&r.gamma_hulls[1]));
}

#[test]
fn default_spacing_hull_is_fast_and_tight() {
    let inst = Instance::unit_disks(vec![pt(1, 1)], q(1, 3)).unwrap();
    let grid = GridSpec::new(pt(0, 0), q(1, 2304), (1, 1));
    let r = grid_round_instance(&inst, &grid).unwrap();
    let area = crate::geom::to_f64(&r.gamma_hulls[0].area2()) / 2.0;
    assert!(area <= std::f64::consts::PI && area > std::f64::consts::PI - 0.01);
}
