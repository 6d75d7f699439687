//! Exact-arithmetic geometric primitives shared by every other module.
//!
//! Coordinates are arbitrary-precision rationals; orientation, intersection
//! and inclusion predicates never round. Euclidean lengths are irrational in
//! general and are only produced as `f64` at reporting boundaries.

pub mod cut;
pub mod lengths;
pub mod polygon;
pub mod primitives;
pub mod rational;

pub use cut::{cut_polygon_components, cut_polygon_intervals, cut_segment_components, interior_endpoints, merged_endpoints, CutComponent};
pub use lengths::{compare_lengths, length_bounds, sqrt_bounds};
pub use polygon::{convex_hull, polygon_metrics, Polygon, PolygonMetrics};
pub use primitives::{
    clip_segment, intersect_segments, orient, segment_distance_sq, Cut, Orientation, Point, Segment, SegmentIntersection, Window,
};
pub use rational::{format_q, parse_q, q, qi, to_f64, Q};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("window has min > max")]
    InvertedWindow,
    #[error("cut coordinate is not strictly inside the window")]
    CutOutsideWindow,
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("all points are collinear; hull is degenerate")]
    DegenerateHull,
    #[error("polygon boundary self-intersects")]
    SelfIntersecting,
}

/// Shorthand for a point with integer coordinates.
pub fn pt(x: i64, y: i64) -> Point {
    Point::new(qi(x), qi(y))
}

/// Shorthand for a point with rational coordinates `(xn/xd, yn/yd)`.
pub fn ptq(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
    Point::new(q(xn, xd), q(yn, yd))
}

pub fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
    Segment::new(pt(a.0, a.1), pt(b.0, b.1))
}

pub fn window(xmin: i64, xmax: i64, ymin: i64, ymax: i64) -> Window {
    Window::new(qi(xmin), qi(xmax), qi(ymin), qi(ymax)).expect("ordered window bounds")
}

/// Closed polyline through `points` (last joined back to first).
pub fn closed_polyline(points: &[Point]) -> Vec<Segment> {
    let n = points.len();
    if n == 1 {
        return vec![Segment::new(points[0].clone(), points[0].clone())];
    }
    (0..n).map(|i| Segment::new(points[i].clone(), points[(i + 1) % n].clone())).collect()
}
