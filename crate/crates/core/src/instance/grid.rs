use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{Instance, Region};
use crate::geom::rational::{floor_to, is_multiple, serde_q};
use crate::geom::{convex_hull, q, qi, GeomError, Point, Polygon, Window, Q};
use crate::solvers::{centers_heuristic, Tour};

/// Regular grid `origin + (i*spacing, j*spacing)`, `0 <= i,j <= extent`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub origin: Point,
    #[serde(with = "serde_q")]
    pub spacing: Q,
    pub extent: (u64, u64),
    /// Spacing was coarsened for desk-scale runs; guarantees do not apply.
    pub demo: bool,
}

impl GridSpec {
    pub fn new(origin: Point, spacing: Q, extent: (u64, u64)) -> Self {
        assert!(spacing > Q::zero(), "grid spacing must be positive");
        GridSpec { origin, spacing, extent, demo: false }
    }

    fn origin_of(&self, x_axis: bool) -> &Q {
        if x_axis {
            &self.origin.x
        } else {
            &self.origin.y
        }
    }

    pub fn is_grid_x(&self, v: &Q) -> bool {
        is_multiple(v, &self.origin.x, &self.spacing)
    }

    pub fn is_grid_y(&self, v: &Q) -> bool {
        is_multiple(v, &self.origin.y, &self.spacing)
    }

    pub fn is_grid_point(&self, p: &Point) -> bool {
        self.is_grid_x(&p.x) && self.is_grid_y(&p.y)
    }

    pub fn is_half_grid(&self, v: &Q, x_axis: bool) -> bool {
        is_multiple(v, self.origin_of(x_axis), &(&self.spacing / qi(2)))
    }

    pub fn floor(&self, v: &Q, x_axis: bool) -> Q {
        floor_to(v, self.origin_of(x_axis), &self.spacing)
    }

    pub fn ceil(&self, v: &Q, x_axis: bool) -> Q {
        crate::geom::rational::ceil_to(v, self.origin_of(x_axis), &self.spacing)
    }

    /// Nearest grid value; exact halves round up.
    pub fn round(&self, v: &Q, x_axis: bool) -> Q {
        let o = self.origin_of(x_axis);
        let k = ((v - o) / &self.spacing + q(1, 2)).floor();
        o + k * &self.spacing
    }

    pub fn snap(&self, p: &Point) -> Point {
        Point::new(self.round(&p.x, true), self.round(&p.y, false))
    }

    pub fn square(&self) -> Window {
        let w = Q::from_integer(BigInt::from(self.extent.0)) * &self.spacing;
        let h = Q::from_integer(BigInt::from(self.extent.1)) * &self.spacing;
        Window::new(self.origin.x.clone(), &self.origin.x + w, self.origin.y.clone(), &self.origin.y + h).expect("positive extent")
    }
}

#[derive(Clone, Debug, Default)]
pub struct GridOptions {
    /// Replace the default spacing by a coarser one (reports are flagged).
    pub demo_spacing: Option<Q>,
    /// Permit k < 6 or epsilon > 1/3.
    pub allow_small: bool,
}

#[derive(Clone, Debug)]
pub enum GridOutcome {
    Grid { grid: GridSpec, square: Window },
    /// No square of the required side covers the regions; the centres tour
    /// is then already within the additive bound and is returned instead.
    NotLocalizable { side: Q, fallback: Tour },
}

#[derive(Debug, thiserror::Error)]
pub enum GridError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("grid spacing too coarse for region {0}: fewer than 3 non-collinear grid points")]
    SpacingTooCoarse(usize),
    #[error("grid extent does not fit in 64 bits")]
    ExtentOverflow,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Bounding box of all regions (disks contribute centre +- 1).
pub fn regions_bbox(inst: &Instance) -> Option<Window> {
    let mut pts = Vec::new();
    for r in &inst.regions {
        match r {
            Region::Disk(c) => {
                pts.push(Point::new(&c.x - qi(1), &c.y - qi(1)));
                pts.push(Point::new(&c.x + qi(1), &c.y + qi(1)));
            }
            Region::Polygon(p) => pts.extend(p.vertices().iter().cloned()),
        }
    }
    Window::bounding(pts.iter())
}

pub fn derive_grid(inst: &Instance, opts: &GridOptions) -> Result<GridOutcome, GridError> {
    let k = inst.k();
    if k == 0 {
        return Err(GridError::Precondition("instance has no regions".into()));
    }
    if !opts.allow_small && (k < 6 || inst.epsilon > q(1, 3)) {
        return Err(GridError::Precondition(format!("need k >= 6 and epsilon <= 1/3 (k = {k}); pass allow_small to override")));
    }
    let kq = qi(k as i64);
    let side = (qi(3) * &kq / &inst.epsilon).ceil();
    let n = (&kq / &inst.epsilon).ceil();
    let default_spacing = Q::one() / (qi(2) * &n * qi(2) * &n);
    let bbox = regions_bbox(inst).expect("nonempty instance");
    if bbox.width() > side || bbox.height() > side {
        return Ok(GridOutcome::NotLocalizable { side, fallback: centers_heuristic(inst, &inst.epsilon) });
    }
    let (spacing, demo) = match &opts.demo_spacing {
        Some(s) if s.is_positive() => (s.clone(), true),
        Some(_) => return Err(GridError::Precondition("demo spacing must be positive".into())),
        None => (default_spacing, false),
    };
    let floor_origin = Point::new(bbox.xmin.floor(), bbox.ymin.floor());
    let origin = if &floor_origin.x + &side >= bbox.xmax && &floor_origin.y + &side >= bbox.ymax {
        floor_origin
    } else {
        Point::new(bbox.xmin.clone(), bbox.ymin.clone())
    };
    let count = (&side / &spacing).ceil().to_integer().to_u64().ok_or(GridError::ExtentOverflow)?;
    let grid = GridSpec { origin, spacing, extent: (count, count), demo };
    let square = grid.square();
    Ok(GridOutcome::Grid { grid, square })
}

/// Instance with every region replaced by the convex hull of its grid points.
#[derive(Clone, Debug)]
pub struct RoundedInstance {
    pub base: Instance,
    pub grid: GridSpec,
    /// Snapped centres (disks) or vertex centroids (polygons).
    pub centers: Vec<Point>,
    pub gamma_hulls: Vec<Polygon>,
    pub bounding_square: Window,
}

/// Extreme grid points of the unit disk at grid centre `c`, column by column.
fn disk_grid_extremes(c: &Point, spacing: &Q) -> Vec<Point> {
    // (i*s)^2 + (j*s)^2 <= 1  <=>  j^2 <= 1/s^2 - i^2
    let inv_sq = Q::one() / (spacing * spacing);
    let imax = inv_sq.floor().to_integer().sqrt();
    let mut pts = Vec::new();
    let mut i = -imax.clone();
    while i <= imax {
        let r = &inv_sq - Q::from_integer(&i * &i);
        let jmax = r.floor().to_integer().sqrt();
        let x = &c.x + Q::from_integer(i.clone()) * spacing;
        let dy = Q::from_integer(jmax) * spacing;
        pts.push(Point::new(x.clone(), &c.y + &dy));
        pts.push(Point::new(x, &c.y - dy));
        i += 1;
    }
    pts
}

fn polygon_grid_points(poly: &Polygon, grid: &GridSpec) -> Vec<Point> {
    let bw = poly.bounding_window();
    let mut pts = Vec::new();
    let mut x = grid.ceil(&bw.xmin, true);
    while x <= bw.xmax {
        let mut y = grid.ceil(&bw.ymin, false);
        while y <= bw.ymax {
            let p = Point::new(x.clone(), y.clone());
            if poly.contains(&p) {
                pts.push(p);
            }
            y += &grid.spacing;
        }
        x += &grid.spacing;
    }
    pts
}

pub fn grid_round_instance(inst: &Instance, grid: &GridSpec) -> Result<RoundedInstance, GridError> {
    let mut centers = Vec::new();
    let mut hulls = Vec::new();
    for (idx, r) in inst.regions.iter().enumerate() {
        let (center, pts) = match r {
            Region::Disk(c) => {
                let s = grid.snap(c);
                let pts = disk_grid_extremes(&s, &grid.spacing);
                (s, pts)
            }
            Region::Polygon(p) => (r.anchor(), polygon_grid_points(p, grid)),
        };
        let hull = convex_hull(&pts).map_err(|_| GridError::SpacingTooCoarse(idx))?;
        centers.push(center);
        hulls.push(hull);
    }
    Ok(RoundedInstance { base: inst.clone(), grid: grid.clone(), centers, gamma_hulls: hulls, bounding_square: grid.square() })
}

/// Grid points inside a Γ-hull, in lexicographic order.
pub fn gamma_points(hull: &Polygon, grid: &GridSpec) -> Vec<Point> {
    let mut pts = polygon_grid_points(hull, grid);
    pts.sort();
    pts
}

/// Moves every touch point of `tour` to the nearest grid point of its
/// region's Γ-hull (ties to the lexicographically smallest).
pub fn grid_round_tour(tour: &Tour, rounded: &RoundedInstance) -> Tour {
    let points = tour
        .order
        .iter()
        .zip(&tour.points)
        .map(|(&r, p)| {
            gamma_points(&rounded.gamma_hulls[r], &rounded.grid)
                .into_iter()
                .min_by(|a, b| a.dist_sq(p).cmp(&b.dist_sq(p)).then(a.cmp(b)))
                .expect("Γ-hulls have grid vertices")
        })
        .collect();
    Tour::from_points(tour.order.clone(), points)
}
