use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Instance, InstanceError};
use crate::geom::{q, qi, Point, Polygon, Q};

#[derive(Debug, thiserror::Error)]
pub enum GenerateError {
    #[error("placed {placed} of {k} disks within {attempts} attempts; use a larger box")]
    Budget { k: usize, placed: usize, attempts: usize },
    #[error("box side must exceed 2")]
    BoxTooSmall,
    #[error("unknown counterexample {0:?}")]
    Unknown(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("shipped counterexample failed certification: {0}")]
    Certification(String),
}

const COORD_DENOM: i64 = 100;

/// `k` disjoint unit disks with centres on the 1/100 lattice inside `[0, side]^2`.
///
/// Rejection sampling; the attempt budget is `1000 * k`. Sampling stays fast
/// while the disks cover at most a quarter of the box, i.e. `4*pi*k <= side^2`.
pub fn generate_random(k: usize, seed: u64, side: i64) -> Result<Instance, GenerateError> {
    if side <= 2 {
        return Err(GenerateError::BoxTooSmall);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = COORD_DENOM;
    let hi = (side - 1) * COORD_DENOM;
    let budget = 1000 * k.max(1);
    let mut centers: Vec<Point> = Vec::with_capacity(k);
    let mut attempts = 0;
    while centers.len() < k {
        if attempts == budget {
            return Err(GenerateError::Budget { k, placed: centers.len(), attempts });
        }
        attempts += 1;
        let p = Point::new(q(rng.gen_range(lo..=hi), COORD_DENOM), q(rng.gen_range(lo..=hi), COORD_DENOM));
        if centers.iter().all(|c| c.dist_sq(&p) > qi(4)) {
            centers.push(p);
        }
    }
    Ok(Instance::unit_disks(centers, q(1, 3))?)
}

/// A shipped instance together with the certificate proving its defining property.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Counterexample {
    pub name: String,
    #[serde(skip)]
    pub instance: Instance,
    pub instance_json: String,
    pub certificate: crate::solvers::Certificate,
}

pub fn generate_counterexample(name: &str) -> Result<Counterexample, GenerateError> {
    let instance = match name {
        "localization" => localization_instance(),
        "disconnected_region_span" => region_span_instance(),
        other => return Err(GenerateError::Unknown(other.to_string())),
    };
    let certificate = crate::solvers::certify(name, &instance).map_err(|e| GenerateError::Certification(e.to_string()))?;
    Ok(Counterexample { name: name.to_string(), instance_json: instance.to_json(), instance, certificate })
}

fn poly(v: &[(Q, Q)]) -> Polygon {
    Polygon::new(v.iter().map(|(x, y)| Point::new(x.clone(), y.clone())).collect()).expect("shipped polygon is simple")
}

fn h(n: i64) -> Q {
    q(n, 2)
}

fn i(n: i64) -> Q {
    qi(n)
}

/// Four arms whose tips sit at the corners of `[0,2]^2`. Near the tips a tour
/// must go around the square; far to the right the arms pass within a
/// vertical segment of length 3, so a doubled segment of length 6 suffices.
pub fn localization_instance() -> Instance {
    let a = poly(&[
        (i(0), i(0)),
        (i(-1), h(-1)),
        (i(-1), i(-8)),
        (i(30), i(-8)),
        (i(30), i(0)),
        (i(20), i(0)),
        (i(20), i(-3)),
        (h(-1), i(-3)),
        (h(-1), i(-1)),
    ]);
    let b = poly(&[
        (i(2), i(0)),
        (h(5), i(-1)),
        (i(18), i(-1)),
        (i(18), i(1)),
        (i(30), i(1)),
        (i(30), q(6, 5)),
        (i(17), q(6, 5)),
        (i(17), h(-1)),
        (i(3), h(-1)),
    ]);
    let c = poly(&[
        (i(2), i(2)),
        (i(3), h(5)),
        (i(17), h(5)),
        (i(17), i(2)),
        (i(30), i(2)),
        (i(30), q(11, 5)),
        (i(18), q(11, 5)),
        (i(18), i(3)),
        (h(5), i(3)),
    ]);
    let d = poly(&[
        (i(0), i(2)),
        (h(-1), i(3)),
        (h(-1), i(5)),
        (i(20), i(5)),
        (i(20), i(3)),
        (i(30), i(3)),
        (i(30), i(10)),
        (i(-1), i(10)),
        (i(-1), h(5)),
    ]);
    Instance::polygons(vec![a, b, c, d], i(8), q(1, 3)).expect("shipped instance is disjoint")
}

fn rect(x0: i64, x1: i64, y0: i64, y1: i64) -> Polygon {
    poly(&[(i(x0), i(y0)), (i(x1), i(y0)), (i(x1), i(y1)), (i(x0), i(y1))])
}

/// Four anchor squares force a diamond-shaped tour; two squares near its top
/// make the vertical cut `x = 0` dark, and a hook-shaped region crosses the
/// cut near the origin but is visited by the tour far from it.
pub fn region_span_instance() -> Instance {
    let hook = poly(&[(h(-1), i(-1)), (i(6), i(-1)), (i(6), i(-8)), (i(5), i(-8)), (i(5), i(-2)), (h(-1), i(-2))]);
    let regions = vec![
        rect(1, 3, 14, 16),
        rect(12, 14, -1, 1),
        rect(1, 3, -16, -14),
        rect(-14, -12, -1, 1),
        rect(-3, -1, 10, 12),
        rect(1, 3, 10, 12),
        hook,
    ];
    Instance::polygons(regions, i(8), q(1, 3)).expect("shipped instance is disjoint")
}
