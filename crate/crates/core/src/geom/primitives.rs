use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_q, serde_q, to_f64, Q};
use super::GeomError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "serde_q")]
    pub x: Q,
    #[serde(with = "serde_q")]
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn dist_sq(&self, other: &Point) -> Q {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }

    pub fn dist(&self, other: &Point) -> f64 {
        to_f64(&self.dist_sq(other)).sqrt()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let two = Q::from_integer(2.into());
        Point::new((&self.x + &other.x) / &two, (&self.y + &other.y) / two)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_q(&self.x), format_q(&self.y))
    }
}

/// Sign of the cross product `(b - a) x (c - a)`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let v = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    v.cmp(&Q::zero())
}

/// A closed line segment with exact endpoints; `a == b` is a point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}-{:?}", self.a, self.b)
    }
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn len_sq(&self) -> Q {
        self.a.dist_sq(&self.b)
    }

    pub fn length(&self) -> f64 {
        self.a.dist(&self.b)
    }

    /// Endpoints in lexicographic order; used as a canonical key.
    pub fn canonical(&self) -> Segment {
        if self.a <= self.b {
            self.clone()
        } else {
            Segment::new(self.b.clone(), self.a.clone())
        }
    }

    pub fn point_at(&self, t: &Q) -> Point {
        Point::new(
            &self.a.x + t * (&self.b.x - &self.a.x),
            &self.a.y + t * (&self.b.y - &self.a.y),
        )
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        if orient(&self.a, &self.b, p) != Ordering::Equal {
            return false;
        }
        within(&p.x, &self.a.x, &self.b.x) && within(&p.y, &self.a.y, &self.b.y)
    }

    /// Parameter of the point of the segment closest to `p`, clamped to `[0, 1]`.
    pub fn closest_param(&self, p: &Point) -> Q {
        let len = self.len_sq();
        if len.is_zero() {
            return Q::zero();
        }
        let t = ((&p.x - &self.a.x) * (&self.b.x - &self.a.x) + (&p.y - &self.a.y) * (&self.b.y - &self.a.y)) / len;
        clamp01(t)
    }

    pub fn closest_point(&self, p: &Point) -> Point {
        self.point_at(&self.closest_param(p))
    }

    pub fn is_axis_parallel(&self) -> bool {
        self.a.x == self.b.x || self.a.y == self.b.y
    }
}

pub(crate) fn clamp01(t: Q) -> Q {
    let one = Q::from_integer(1.into());
    if t.is_negative() {
        Q::zero()
    } else if t > one {
        one
    } else {
        t
    }
}

pub(crate) fn within(v: &Q, a: &Q, b: &Q) -> bool {
    if a <= b {
        a <= v && v <= b
    } else {
        b <= v && v <= a
    }
}

/// Result of intersecting two closed segments.
#[derive(Clone, Debug, PartialEq)]
pub enum SegmentIntersection {
    None,
    Point(Point),
    Overlap(Point, Point),
}

pub fn intersect_segments(s: &Segment, t: &Segment) -> SegmentIntersection {
    // a point is "collinear" with every segment, so test containment first
    if t.is_degenerate() {
        return if s.contains_point(&t.a) { SegmentIntersection::Point(t.a.clone()) } else { SegmentIntersection::None };
    }
    if s.is_degenerate() {
        return if t.contains_point(&s.a) { SegmentIntersection::Point(s.a.clone()) } else { SegmentIntersection::None };
    }
    let d1 = orient(&t.a, &t.b, &s.a);
    let d2 = orient(&t.a, &t.b, &s.b);
    let d3 = orient(&s.a, &s.b, &t.a);
    let d4 = orient(&s.a, &s.b, &t.b);
    let collinear = d1 == Ordering::Equal && d2 == Ordering::Equal;
    if collinear && d3 == Ordering::Equal && d4 == Ordering::Equal {
        return collinear_overlap(s, t);
    }
    if d1 != Ordering::Equal && d1 == d2 || d3 != Ordering::Equal && d3 == d4 {
        return SegmentIntersection::None;
    }
    // Proper or touching intersection of non-parallel segments.
    let rx = &s.b.x - &s.a.x;
    let ry = &s.b.y - &s.a.y;
    let sx = &t.b.x - &t.a.x;
    let sy = &t.b.y - &t.a.y;
    let denom = &rx * &sy - &ry * &sx;
    if denom.is_zero() {
        return SegmentIntersection::None;
    }
    let u = ((&t.a.x - &s.a.x) * &sy - (&t.a.y - &s.a.y) * &sx) / denom;
    SegmentIntersection::Point(s.point_at(&u))
}

fn collinear_overlap(s: &Segment, t: &Segment) -> SegmentIntersection {
    let (s0, s1) = ordered(&s.a, &s.b);
    let (t0, t1) = ordered(&t.a, &t.b);
    let lo = if s0 > t0 { s0 } else { t0 };
    let hi = if s1 < t1 { s1 } else { t1 };
    match lo.cmp(hi) {
        Ordering::Greater => SegmentIntersection::None,
        Ordering::Equal => SegmentIntersection::Point(lo.clone()),
        Ordering::Less => SegmentIntersection::Overlap(lo.clone(), hi.clone()),
    }
}

fn ordered<'a>(a: &'a Point, b: &'a Point) -> (&'a Point, &'a Point) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Squared distance between two closed segments together with a closest pair `(on s, on t)`.
pub fn segment_distance_sq(s: &Segment, t: &Segment) -> (Q, Point, Point) {
    match intersect_segments(s, t) {
        SegmentIntersection::Point(p) => return (Q::zero(), p.clone(), p),
        SegmentIntersection::Overlap(p, _) => return (Q::zero(), p.clone(), p),
        SegmentIntersection::None => {}
    }
    let candidates = [
        (s.a.clone(), t.closest_point(&s.a)),
        (s.b.clone(), t.closest_point(&s.b)),
        (s.closest_point(&t.a), t.a.clone()),
        (s.closest_point(&t.b), t.b.clone()),
    ];
    candidates
        .into_iter()
        .map(|(p, r)| (p.dist_sq(&r), p, r))
        .min_by(|x, y| x.0.cmp(&y.0).then_with(|| x.2.cmp(&y.2)).then_with(|| x.1.cmp(&y.1)))
        .expect("four candidates")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Vertical,
    Horizontal,
}

impl Orientation {
    pub fn other(self) -> Orientation {
        match self {
            Orientation::Vertical => Orientation::Horizontal,
            Orientation::Horizontal => Orientation::Vertical,
        }
    }
}

/// Axis-aligned closed rectangle; degenerate windows are allowed.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    #[serde(with = "serde_q")]
    pub xmin: Q,
    #[serde(with = "serde_q")]
    pub xmax: Q,
    #[serde(with = "serde_q")]
    pub ymin: Q,
    #[serde(with = "serde_q")]
    pub ymax: Q,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]x[{}, {}]",
            format_q(&self.xmin),
            format_q(&self.xmax),
            format_q(&self.ymin),
            format_q(&self.ymax)
        )
    }
}

impl Window {
    pub fn new(xmin: Q, xmax: Q, ymin: Q, ymax: Q) -> Result<Self, GeomError> {
        if xmin > xmax || ymin > ymax {
            return Err(GeomError::InvertedWindow);
        }
        Ok(Window { xmin, xmax, ymin, ymax })
    }

    pub fn width(&self) -> Q {
        &self.xmax - &self.xmin
    }

    pub fn height(&self) -> Q {
        &self.ymax - &self.ymin
    }

    /// Interval of the window along the axis that a cut of `o` runs along.
    pub fn along_range(&self, o: Orientation) -> (&Q, &Q) {
        match o {
            Orientation::Vertical => (&self.ymin, &self.ymax),
            Orientation::Horizontal => (&self.xmin, &self.xmax),
        }
    }

    /// Interval of the window across a cut of orientation `o`.
    pub fn across_range(&self, o: Orientation) -> (&Q, &Q) {
        self.along_range(o.other())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.xmin <= p.x && p.x <= self.xmax && self.ymin <= p.y && p.y <= self.ymax
    }

    pub fn contains_open(&self, p: &Point) -> bool {
        self.xmin < p.x && p.x < self.xmax && self.ymin < p.y && p.y < self.ymax
    }

    /// Smallest window containing all points, or `None` for an empty input.
    pub fn bounding<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<Window> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut w = Window { xmin: first.x.clone(), xmax: first.x.clone(), ymin: first.y.clone(), ymax: first.y.clone() };
        for p in it {
            if p.x < w.xmin {
                w.xmin = p.x.clone();
            }
            if p.x > w.xmax {
                w.xmax = p.x.clone();
            }
            if p.y < w.ymin {
                w.ymin = p.y.clone();
            }
            if p.y > w.ymax {
                w.ymax = p.y.clone();
            }
        }
        Some(w)
    }

    /// True when the open segment interior of `s` lies in the open window.
    pub fn contains_segment_interior(&self, s: &Segment) -> bool {
        if s.is_degenerate() || !self.contains(&s.a) || !self.contains(&s.b) {
            return false;
        }
        let same_side = (s.a.x == self.xmin && s.b.x == self.xmin)
            || (s.a.x == self.xmax && s.b.x == self.xmax)
            || (s.a.y == self.ymin && s.b.y == self.ymin)
            || (s.a.y == self.ymax && s.b.y == self.ymax);
        !same_side
    }

    /// Splits along a cut into the (low, high) sub-windows.
    pub fn split(&self, cut: &Cut) -> (Window, Window) {
        let mut lo = self.clone();
        let mut hi = self.clone();
        match cut.orientation {
            Orientation::Vertical => {
                lo.xmax = cut.coord.clone();
                hi.xmin = cut.coord.clone();
            }
            Orientation::Horizontal => {
                lo.ymax = cut.coord.clone();
                hi.ymin = cut.coord.clone();
            }
        }
        (lo, hi)
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.xmin.clone(), self.ymin.clone()),
            Point::new(self.xmax.clone(), self.ymin.clone()),
            Point::new(self.xmax.clone(), self.ymax.clone()),
            Point::new(self.xmin.clone(), self.ymax.clone()),
        ]
    }
}

/// An axis-parallel line through the interior of a window.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub orientation: Orientation,
    #[serde(with = "serde_q")]
    pub coord: Q,
    pub window: Window,
}

impl Cut {
    pub fn new(orientation: Orientation, coord: Q, window: Window) -> Result<Self, GeomError> {
        let (lo, hi) = window.across_range(orientation);
        if !(lo < &coord && &coord < hi) {
            return Err(GeomError::CutOutsideWindow);
        }
        Ok(Cut { orientation, coord, window })
    }

    pub fn vertical(x: Q, window: Window) -> Result<Self, GeomError> {
        Cut::new(Orientation::Vertical, x, window)
    }

    pub fn horizontal(y: Q, window: Window) -> Result<Self, GeomError> {
        Cut::new(Orientation::Horizontal, y, window)
    }

    /// Coordinate of `p` along the cut direction.
    pub fn along<'a>(&self, p: &'a Point) -> &'a Q {
        match self.orientation {
            Orientation::Vertical => &p.y,
            Orientation::Horizontal => &p.x,
        }
    }

    /// Coordinate of `p` across the cut direction.
    pub fn across<'a>(&self, p: &'a Point) -> &'a Q {
        match self.orientation {
            Orientation::Vertical => &p.x,
            Orientation::Horizontal => &p.y,
        }
    }

    pub fn point_at(&self, t: &Q) -> Point {
        match self.orientation {
            Orientation::Vertical => Point::new(self.coord.clone(), t.clone()),
            Orientation::Horizontal => Point::new(t.clone(), self.coord.clone()),
        }
    }

    pub fn segment(&self, lo: &Q, hi: &Q) -> Segment {
        Segment::new(self.point_at(lo), self.point_at(hi))
    }

    /// Distance to the nearer parallel window edge.
    pub fn margin(&self) -> Q {
        let (lo, hi) = self.window.across_range(self.orientation);
        let a = &self.coord - lo;
        let b = hi - &self.coord;
        if a < b {
            a
        } else {
            b
        }
    }

    /// Extent of the window across the cut (width for vertical cuts).
    pub fn extent(&self) -> Q {
        let (lo, hi) = self.window.across_range(self.orientation);
        hi - lo
    }

    /// Same line, reinterpreted inside another window (must still be interior).
    pub fn in_window(&self, window: Window) -> Result<Cut, GeomError> {
        Cut::new(self.orientation, self.coord.clone(), window)
    }

    /// Whether `p` lies on the closed side of the cut with smaller coordinate.
    pub fn low_side_contains(&self, p: &Point) -> bool {
        self.across(p) <= &self.coord
    }

    pub fn high_side_contains(&self, p: &Point) -> bool {
        self.across(p) >= &self.coord
    }
}

/// Absolute value helper for signed distance checks.
pub fn qabs(v: &Q) -> Q {
    v.abs()
}

/// Part of `s` inside the closed window (Liang–Barsky on exact parameters).
pub fn clip_segment(w: &Window, s: &Segment) -> Option<Segment> {
    let mut t0 = Q::zero();
    let mut t1 = Q::from_integer(1.into());
    let dx = &s.b.x - &s.a.x;
    let dy = &s.b.y - &s.a.y;
    let checks = [
        (-dx.clone(), &s.a.x - &w.xmin),
        (dx.clone(), &w.xmax - &s.a.x),
        (-dy.clone(), &s.a.y - &w.ymin),
        (dy.clone(), &w.ymax - &s.a.y),
    ];
    for (p, qv) in checks {
        if p.is_zero() {
            if qv.is_negative() {
                return None;
            }
            continue;
        }
        let r = &qv / &p;
        if p.is_negative() {
            if r > t1 {
                return None;
            }
            if r > t0 {
                t0 = r;
            }
        } else {
            if r < t0 {
                return None;
            }
            if r < t1 {
                t1 = r;
            }
        }
    }
    Some(Segment::new(s.point_at(&t0), s.point_at(&t1)))
}
