//! Problem instances: disjoint unit disks or disk-like polygons, their JSON
//! encoding, grid rounding and generators.

mod generate;
mod grid;
mod render;

use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::geom::rational::{format_q, parse_q, ParseRationalError};
use crate::geom::{q, qi, GeomError, Point, Polygon, Q};

pub use generate::{generate_counterexample, generate_random, Counterexample, GenerateError};
pub use render::{render_svg, render_svg_string, Scene};
pub use grid::{derive_grid, gamma_points, grid_round_instance, grid_round_tour, regions_bbox, GridOptions, GridOutcome, GridSpec, RoundedInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    UnitDisks,
    DiskLikePolygons,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    /// Unit disk given by its centre.
    Disk(Point),
    Polygon(Polygon),
}

impl Region {
    /// Representative point used by centre-based heuristics.
    pub fn anchor(&self) -> Point {
        match self {
            Region::Disk(c) => c.clone(),
            Region::Polygon(p) => {
                let v = p.vertices();
                let n = Q::from_integer((v.len() as i64).into());
                let sx: Q = v.iter().map(|p| p.x.clone()).sum();
                let sy: Q = v.iter().map(|p| p.y.clone()).sum();
                Point::new(sx / &n, sy / n)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub kind: InstanceKind,
    pub regions: Vec<Region>,
    pub alpha: Q,
    pub epsilon: Q,
}

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("regions {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("polygon {index} is invalid: {source}")]
    InvalidPolygon { index: usize, source: GeomError },
    #[error("invalid rational: {0}")]
    Rational(#[from] ParseRationalError),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("instance of kind {0:?} must not carry {1}")]
    WrongRegionList(InstanceKind, &'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Instance {
    pub fn unit_disks(centers: Vec<Point>, epsilon: Q) -> Result<Self, InstanceError> {
        let inst = Instance { kind: InstanceKind::UnitDisks, regions: centers.into_iter().map(Region::Disk).collect(), alpha: qi(4), epsilon };
        inst.validate()?;
        Ok(inst)
    }

    pub fn polygons(polys: Vec<Polygon>, alpha: Q, epsilon: Q) -> Result<Self, InstanceError> {
        let inst = Instance { kind: InstanceKind::DiskLikePolygons, regions: polys.into_iter().map(Region::Polygon).collect(), alpha, epsilon };
        inst.validate()?;
        Ok(inst)
    }

    pub fn k(&self) -> usize {
        self.regions.len()
    }

    pub fn centers(&self) -> Vec<Point> {
        self.regions.iter().map(Region::anchor).collect()
    }

    /// Certifies pairwise disjointness exactly; reports the first offending pair.
    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.epsilon <= Q::zero() {
            return Err(InstanceError::NonPositiveEpsilon);
        }
        for i in 0..self.regions.len() {
            for j in (i + 1)..self.regions.len() {
                let overlap = match (&self.regions[i], &self.regions[j]) {
                    (Region::Disk(a), Region::Disk(b)) => a.dist_sq(b) <= qi(4),
                    (Region::Polygon(a), Region::Polygon(b)) => a.intersects(b),
                    _ => true,
                };
                if overlap {
                    return Err(InstanceError::Overlap(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawInstance::from(self)).expect("instance serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let raw: RawInstance = serde_json::from_str(text)
            .map_err(|e| InstanceError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
        raw.into_instance()
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, InstanceError> {
    Instance::from_json(&std::fs::read_to_string(path)?)
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<(), InstanceError> {
    std::fs::write(path, inst.to_json() + "\n")?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct RawDisk {
    center: [String; 2],
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    kind: InstanceKind,
    epsilon: String,
    #[serde(default)]
    alpha: Option<String>,
    #[serde(default)]
    disks: Vec<RawDisk>,
    #[serde(default)]
    polygons: Vec<Vec<[String; 2]>>,
}

impl From<&Instance> for RawInstance {
    fn from(inst: &Instance) -> Self {
        let mut disks = Vec::new();
        let mut polygons = Vec::new();
        for r in &inst.regions {
            match r {
                Region::Disk(c) => disks.push(RawDisk { center: [format_q(&c.x), format_q(&c.y)] }),
                Region::Polygon(p) => polygons.push(p.vertices().iter().map(|v| [format_q(&v.x), format_q(&v.y)]).collect()),
            }
        }
        RawInstance { kind: inst.kind, epsilon: format_q(&inst.epsilon), alpha: Some(format_q(&inst.alpha)), disks, polygons }
    }
}

impl RawInstance {
    fn into_instance(self) -> Result<Instance, InstanceError> {
        let epsilon = parse_q(&self.epsilon)?;
        let default_alpha = match self.kind {
            InstanceKind::UnitDisks => qi(4),
            InstanceKind::DiskLikePolygons => q(4, 1),
        };
        let alpha = self.alpha.as_deref().map(parse_q).transpose()?.unwrap_or(default_alpha);
        let regions = match self.kind {
            InstanceKind::UnitDisks => {
                if !self.polygons.is_empty() {
                    return Err(InstanceError::WrongRegionList(self.kind, "polygons"));
                }
                self.disks
                    .iter()
                    .map(|d| Ok(Region::Disk(Point::new(parse_q(&d.center[0])?, parse_q(&d.center[1])?))))
                    .collect::<Result<Vec<_>, InstanceError>>()?
            }
            InstanceKind::DiskLikePolygons => {
                if !self.disks.is_empty() {
                    return Err(InstanceError::WrongRegionList(self.kind, "disks"));
                }
                let mut out = Vec::new();
                for (index, raw) in self.polygons.iter().enumerate() {
                    let pts = raw
                        .iter()
                        .map(|c| Ok(Point::new(parse_q(&c[0])?, parse_q(&c[1])?)))
                        .collect::<Result<Vec<_>, InstanceError>>()?;
                    out.push(Region::Polygon(Polygon::new(pts).map_err(|source| InstanceError::InvalidPolygon { index, source })?));
                }
                out
            }
        };
        let inst = Instance { kind: self.kind, regions, alpha, epsilon };
        inst.validate()?;
        Ok(inst)
    }
}

#[cfg(test)]
mod tests;
