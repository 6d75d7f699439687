use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::primitives::{orient, Point, Segment};
use super::rational::{to_f64, Q};
use super::GeomError;

/// Simple polygon with counterclockwise vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates simplicity and normalises to counterclockwise order.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self, GeomError> {
        vertices.dedup();
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeomError::TooFewVertices(vertices.len()));
        }
        let area2 = signed_area2(&vertices);
        if area2.is_zero() {
            return Err(GeomError::DegenerateHull);
        }
        if area2.is_negative() {
            vertices.reverse();
        }
        let poly = Polygon { vertices };
        if !poly.is_simple() {
            return Err(GeomError::SelfIntersecting);
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment::new(self.vertices[i].clone(), self.vertices[(i + 1) % n].clone()))
    }

    /// Twice the (positive) area.
    pub fn area2(&self) -> Q {
        signed_area2(&self.vertices)
    }

    fn is_simple(&self) -> bool {
        let edges: Vec<Segment> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let hit = super::primitives::intersect_segments(&edges[i], &edges[j]);
                match hit {
                    super::primitives::SegmentIntersection::None => {}
                    super::primitives::SegmentIntersection::Point(p) if adjacent => {
                        let shared = if j == i + 1 { &edges[i].b } else { &edges[i].a };
                        if &p != shared {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn on_boundary(&self, p: &Point) -> bool {
        self.edges().any(|e| e.contains_point(p))
    }

    /// Closed point-in-polygon test (boundary counts as inside).
    pub fn contains(&self, p: &Point) -> bool {
        if self.on_boundary(p) {
            return true;
        }
        let mut inside = false;
        let n = self.vertices.len();
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                // x coordinate of the edge at height p.y
                let x = &a.x + (&p.y - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| orient(&self.vertices[i], &self.vertices[(i + 1) % n], &self.vertices[(i + 2) % n]) != Ordering::Less)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|e| e.length()).sum()
    }

    pub fn bounding_window(&self) -> super::Window {
        super::Window::bounding(self.vertices.iter()).expect("non-empty polygon")
    }

    /// True if the closed polygons share at least one point.
    pub fn intersects(&self, other: &Polygon) -> bool {
        for e in self.edges() {
            for f in other.edges() {
                if super::primitives::intersect_segments(&e, &f) != super::primitives::SegmentIntersection::None {
                    return true;
                }
            }
        }
        self.contains(&other.vertices[0]) || other.contains(&self.vertices[0])
    }

    /// True if the closed segment meets the closed polygon.
    pub fn meets_segment(&self, s: &Segment) -> bool {
        if self.contains(&s.a) || self.contains(&s.b) {
            return true;
        }
        self.edges().any(|e| super::primitives::intersect_segments(&e, s) != super::primitives::SegmentIntersection::None)
    }
}

fn signed_area2(v: &[Point]) -> Q {
    let n = v.len();
    let mut s = Q::zero();
    for i in 0..n {
        let a = &v[i];
        let b = &v[(i + 1) % n];
        s += &a.x * &b.y - &b.x * &a.y;
    }
    s
}

/// Counterclockwise convex hull of the extreme points (Andrew's monotone chain).
pub fn convex_hull(points: &[Point]) -> Result<Polygon, GeomError> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(GeomError::DegenerateHull);
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Ordering::Greater {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Ordering::Greater {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(GeomError::DegenerateHull);
    }
    Ok(Polygon { vertices: lower })
}

/// Size measures of a polygon; lengths are reporting floats.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygonMetrics {
    pub diameter: f64,
    pub perimeter: f64,
    /// Diameter of the largest disk found by a grid search over candidate centres.
    pub inscribed_disk_diameter: f64,
    pub search_resolution: usize,
}

/// Diameter, perimeter and an approximate largest inscribed disk.
///
/// The inscribed disk is searched on a `resolution x resolution` grid of
/// centres over the bounding box; it is a diagnostic, not an exact value.
pub fn polygon_metrics(poly: &Polygon, resolution: usize) -> PolygonMetrics {
    let v = poly.vertices();
    let mut diam_sq = Q::zero();
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            let d = v[i].dist_sq(&v[j]);
            if d > diam_sq {
                diam_sq = d;
            }
        }
    }
    let pts: Vec<(f64, f64)> = v.iter().map(|p| p.to_f64()).collect();
    let w = poly.bounding_window();
    let (x0, x1, y0, y1) = (to_f64(&w.xmin), to_f64(&w.xmax), to_f64(&w.ymin), to_f64(&w.ymax));
    let res = resolution.max(2);
    let mut best = 0.0f64;
    for i in 0..=res {
        for j in 0..=res {
            let cx = x0 + (x1 - x0) * i as f64 / res as f64;
            let cy = y0 + (y1 - y0) * j as f64 / res as f64;
            if !point_in_polygon_f64(&pts, cx, cy) {
                continue;
            }
            let r = boundary_distance_f64(&pts, cx, cy);
            best = best.max(r);
        }
    }
    PolygonMetrics {
        diameter: to_f64(&diam_sq).sqrt(),
        perimeter: poly.perimeter(),
        inscribed_disk_diameter: 2.0 * best,
        search_resolution: res,
    }
}

fn point_in_polygon_f64(pts: &[(f64, f64)], x: f64, y: f64) -> bool {
    let mut inside = false;
    let n = pts.len();
    for i in 0..n {
        let (ax, ay) = pts[i];
        let (bx, by) = pts[(i + 1) % n];
        if (ay > y) != (by > y) {
            let cx = ax + (y - ay) * (bx - ax) / (by - ay);
            if x < cx {
                inside = !inside;
            }
        }
    }
    inside
}

fn boundary_distance_f64(pts: &[(f64, f64)], x: f64, y: f64) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (ax, ay) = pts[i];
            let (bx, by) = pts[(i + 1) % n];
            let (dx, dy) = (bx - ax, by - ay);
            let len = dx * dx + dy * dy;
            let t = if len == 0.0 { 0.0 } else { (((x - ax) * dx + (y - ay) * dy) / len).clamp(0.0, 1.0) };
            let (px, py) = (ax + t * dx, ay + t * dy);
            ((x - px).powi(2) + (y - py).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}
