use std::cmp::Ordering;

use super::*;
use crate::geom::{closed_polyline, pt, q, qi, seg, window, Cut, Polygon, Segment};
use crate::guillotine::{region_good, EdgeSet, RegionGoodVariant};
use crate::instance::GridSpec;
use crate::span::{is_m_good, m_span};

fn unit_grid(xmin: i64, ymin: i64, w: u64, h: u64) -> GridSpec {
    GridSpec::new(pt(xmin, ymin), qi(1), (w, h))
}

fn resident(e: &EdgeSet, g: &GridSpec) -> bool {
    e.endpoints().iter().all(|p| g.is_grid_point(p))
}

fn same_parity(a: &EdgeSet, b: &EdgeSet) -> bool {
    let odd = |e: &EdgeSet| e.planarize().odd_vertices().into_iter().collect::<std::collections::BTreeSet<_>>();
    odd(a) == odd(b)
}

/// `n` parallel edges of direction (d, 1) whose crossings with `x = x0`
/// are packed into one grid cell.
fn packed(n: i64, d: i64) -> EdgeSet {
    EdgeSet::from_segments((1..=n).map(|j| seg((-j, 0), (d - j, 1))))
}

#[test]
fn grid_cut_with_16_parallel_crossings_is_patched_shorter() {
    let g = unit_grid(-20, -5, 40, 10);
    let e = packed(16, 17);
    let cut = Cut::vertical(qi(0), window(-20, 20, -5, 5)).unwrap();
    let span = m_span(&cut, &e.plain(), 1).unwrap();
    assert_eq!(span, Segment::new(crate::geom::ptq(0, 1, 1, 17), crate::geom::ptq(0, 1, 16, 17)));
    assert_eq!(crossing_count(&e.plain(), &span), 16);
    let (out, rep) = patch_span(&e, &cut, &g, 1).unwrap();
    assert_eq!(rep.kinds, vec![RepairKind::Patch]);
    // box [-1,1] x [0,1]
    assert_eq!(rep.structure_length, qi(6));
    assert_eq!(rep.length_change, Some(Ordering::Less));
    assert!(rep.reattach_delta <= 0.0);
    assert!(rep.net_change() < 0.0);
    assert!(resident(&out, &g));
    assert!(same_parity(&out, &e));
}

#[test]
fn half_grid_cut_with_19_crossings_is_patched_shorter() {
    let g = unit_grid(-20, -5, 40, 10);
    let e = packed(19, 20);
    let cut = Cut::vertical(q(1, 2), window(-20, 20, -5, 5)).unwrap();
    let (out, rep) = patch_span(&e, &cut, &g, 1).unwrap();
    assert_eq!(rep.kinds, vec![RepairKind::Patch]);
    assert_eq!(rep.structure_length, qi(4));
    assert_eq!(rep.length_change, Some(Ordering::Less));
    assert!(resident(&out, &g));
    // 18 crossings stay below the half-grid threshold
    let (_, rep) = patch_span(&packed(18, 20), &cut, &g, 1).unwrap();
    assert!(rep.is_noop());
}

#[test]
fn two_crossings_are_left_alone() {
    let g = unit_grid(-20, -5, 40, 10);
    let e = packed(2, 17);
    let cut = Cut::vertical(qi(0), window(-20, 20, -5, 5)).unwrap();
    let (out, rep) = patch_span(&e, &cut, &g, 1).unwrap();
    assert!(rep.is_noop());
    assert_eq!(out, e);
    let (out, rep) = make_m_good(&e, &cut, &g, 1).unwrap();
    assert!(rep.is_noop());
    assert_eq!(out, e);
}

#[test]
fn patch_keeps_a_visited_centre_attached() {
    let g = unit_grid(-20, -5, 40, 10);
    // crossings at 2/17 .. 16/17 and 18/17, a tour vertex at the box centre
    let mut segs: Vec<Segment> = (2..=16).map(|j| seg((-j, 0), (17 - j, 1))).collect();
    segs.extend([seg((-1, 1), (16, 2)), seg((-5, 1), (0, 1)), seg((0, 1), (5, 2))]);
    let e = EdgeSet::from_segments(segs);
    let cut = Cut::vertical(qi(0), window(-20, 20, -5, 5)).unwrap();
    let (out, rep) = patch_span(&e, &cut, &g, 1).unwrap();
    assert_eq!(rep.kinds, vec![RepairKind::Patch]);
    // [-1,1] x [0,2] plus the spoke
    assert_eq!(rep.structure_length, qi(9));
    assert!(out.endpoints().contains(&pt(0, 1)));
    assert!(same_parity(&out, &e));
    assert_eq!(rep.length_change, Some(Ordering::Less));
}

/// Twenty crossings of `x = 1/2` spread over exactly four grid cells.
fn spread_scene() -> EdgeSet {
    let mut segs = vec![seg((-1, 0), (2, 0)), seg((-1, 4), (2, 4))];
    for i in 0..4 {
        let n = if i < 2 { 5 } else { 4 };
        for j in 0..n {
            segs.push(seg((-2 - 3 * j, i), (18 - 3 * j, i + 1)));
        }
    }
    EdgeSet::from_segments(segs)
}

#[test]
fn h_shape_for_spread_half_grid_span() {
    let g = unit_grid(-20, -5, 40, 10);
    let e = spread_scene();
    let cut = Cut::vertical(q(1, 2), window(-20, 20, -5, 5)).unwrap();
    let span = m_span(&cut, &e.plain(), 1).unwrap();
    assert_eq!(span.len_sq(), qi(16));
    assert_eq!(crossing_count(&e.plain(), &span), 20);
    let (out, rep) = make_m_good(&e, &cut, &g, 1).unwrap();
    assert_eq!(rep.kinds, vec![RepairKind::HShape]);
    // two bars of 4 and a crossbar of 1, within 5δ + 2σ
    assert_eq!(rep.structure_length, qi(9));
    assert!(rep.structure_length <= qi(13));
    assert!(rep.reattach_delta <= 1e-12);
    assert!(resident(&out, &g));
    assert!(is_m_good(&cut, &out.plain(), 1 + GOOD_OFFSET));
    assert!(is_m_good(&cut, &out.plain(), 2));
    assert!(same_parity(&out, &e));
}

#[test]
fn grid_cut_span_is_extended_to_grid_values() {
    let g = unit_grid(-20, -5, 40, 10);
    let e = spread_scene();
    let cut = Cut::vertical(qi(1), window(-20, 20, -5, 5)).unwrap();
    let (out, rep) = make_m_good(&e, &cut, &g, 1).unwrap();
    assert_eq!(rep.kinds, vec![RepairKind::SpanExtension]);
    let span = m_span(&cut, &e.plain(), 1).unwrap();
    let sigma = crate::geom::to_f64(&(cut.along(&span.b) - cut.along(&span.a))).abs();
    assert!(crate::geom::to_f64(&rep.structure_length) <= sigma + 2.0);
    assert!(resident(&out, &g));
    assert!(is_m_good(&cut, &out.plain(), 1 + GOOD_OFFSET));
}

fn straddling_squares() -> Vec<Polygon> {
    (-3..=3)
        .map(|i| Polygon::new(vec![pt(0, 2 * i), pt(1, 2 * i), pt(1, 2 * i + 1), pt(0, 2 * i + 1)]).unwrap())
        .collect()
}

#[test]
fn visiting_segment_on_the_left_grid_line() {
    let g = unit_grid(-10, -10, 20, 20);
    let regions = straddling_squares();
    let tour = EdgeSet::from_segments(closed_polyline(&[pt(-8, -8), pt(-6, -8), pt(-6, 8), pt(-8, 8)]));
    let cut = Cut::vertical(q(1, 2), window(-10, 10, -10, 10)).unwrap();
    assert!(!region_good(&cut, &tour.plain(), &regions, 1, RegionGoodVariant::BothSidesObligation));
    let (out, rep) = make_region_good(&tour, &regions, &cut, &g, 1, 0).unwrap();
    assert_eq!(rep.kinds, vec![RepairKind::VisitingSegment]);
    assert_eq!(rep.structure_length, qi(11));
    assert!((rep.connector_length - 40f64.sqrt()).abs() < 1e-12);
    assert!(out.plain().contains(&seg((0, -5), (0, 6))));
    assert!(region_good(&cut, &out.plain(), &regions, 1, RegionGoodVariant::BothSidesObligation));
    assert!(resident(&out, &g));
    let pg = out.planarize();
    assert!(pg.is_connected() && pg.odd_vertices().is_empty());
}

#[test]
fn region_repair_is_a_noop_when_good() {
    let g = unit_grid(-10, -10, 20, 20);
    let regions = straddling_squares();
    let tour = EdgeSet::from_segments(closed_polyline(&[pt(0, -8), pt(1, -8), pt(1, 8), pt(0, 8)]));
    let cut = Cut::vertical(q(1, 2), window(-10, 10, -10, 10)).unwrap();
    let (out, rep) = make_region_good(&tour, &regions, &cut, &g, 1, 0).unwrap();
    assert!(rep.is_noop());
    assert_eq!(out, tour);
}

#[test]
fn off_grid_cut_is_rejected() {
    let g = unit_grid(-10, -10, 20, 20);
    let cut = Cut::vertical(q(1, 3), window(-10, 10, -10, 10)).unwrap();
    let e = spread_scene();
    assert_eq!(make_m_good(&e, &cut, &g, 1).unwrap_err(), RepairError::OffGrid);
}

#[test]
fn grid_transform_of_a_grid_tour() {
    let g = GridSpec::new(pt(0, 0), q(1, 2), (16, 16));
    let tour = EdgeSet::from_segments(closed_polyline(&[pt(0, 1), pt(7, 0), pt(8, 7), pt(1, 8)]));
    let regions = vec![Polygon::new(vec![pt(3, 3), pt(5, 3), pt(4, 5)]).unwrap()];
    let out = transform_grid_guillotine(&tour, &regions, &g, 1, 1, &window(0, 8, 0, 8)).unwrap();
    assert!(resident(&out.edges, &g));
    let pg = out.edges.planarize();
    assert!(pg.is_connected() && pg.odd_vertices().is_empty());
    assert!(crate::guillotine::verify_certificate(&out.certificate, &out.edges.plain(), &regions, 10, 25, &grid_check_options()));
}

