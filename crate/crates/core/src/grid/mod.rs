//! Grid-rounded repairs: keeping every edge endpoint on the grid while a
//! cut is made good.
//!
//! Repairs replace the crossing portion of edges by an inserted
//! axis-parallel structure (a box, an H, an extended span or a visiting
//! segment), slide the contact points to grid points and duplicate
//! structure pieces to restore even degrees.

mod repair;
mod structure;
mod transform;

use std::cmp::Ordering;

use serde::Serialize;

use crate::geom::rational::serde_q;
use crate::geom::{Point, Segment, Window, Q};

pub use repair::{crossing_count, make_m_good, make_region_good, patch_span, PATCH_THRESHOLD_GRID, PATCH_THRESHOLD_HALF};
pub use structure::{parity_join, reattach, Reattach};
pub use transform::{grid_check_options, transform_grid_guillotine, GridTransformError, GridTransformOutput, GridTransformReport, GOOD_OFFSET};

/// Default region offset C for `make_region_good`.
pub const REGION_OFFSET: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairKind {
    NoOp,
    Patch,
    HShape,
    SpanExtension,
    VisitingSegment,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepairReport {
    pub kinds: Vec<RepairKind>,
    /// Box, H, extended span or visiting segment, before parity duplication.
    #[serde(with = "serde_q")]
    pub structure_length: Q,
    pub parity_length: f64,
    pub connector_length: f64,
    /// Structure, parity duplicates and connector.
    pub added_length: f64,
    /// Edge portions between the first and last contact with the structure.
    pub removed_length: f64,
    /// Change in length of the outer parts when contacts slide (never positive).
    pub reattach_delta: f64,
    pub parity_fixes: Vec<Segment>,
    pub moved_points: Vec<(Point, Point)>,
    /// Certified comparison of the repaired total length against the input.
    #[serde(skip)]
    pub length_change: Option<Ordering>,
}

impl Default for RepairReport {
    fn default() -> Self {
        RepairReport {
            kinds: vec![RepairKind::NoOp],
            structure_length: Q::from_integer(0.into()),
            parity_length: 0.0,
            connector_length: 0.0,
            added_length: 0.0,
            removed_length: 0.0,
            reattach_delta: 0.0,
            parity_fixes: Vec::new(),
            moved_points: Vec::new(),
            length_change: Some(Ordering::Equal),
        }
    }
}

impl RepairReport {
    pub fn is_noop(&self) -> bool {
        self.kinds.iter().all(|k| *k == RepairKind::NoOp)
    }

    pub fn net_change(&self) -> f64 {
        self.added_length - self.removed_length + self.reattach_delta
    }

    /// Folds a later repair on the same cut into this one.
    pub fn absorb(&mut self, other: RepairReport) {
        if other.is_noop() {
            return;
        }
        self.kinds.retain(|k| *k != RepairKind::NoOp);
        self.kinds.extend(other.kinds);
        self.structure_length += other.structure_length;
        self.parity_length += other.parity_length;
        self.connector_length += other.connector_length;
        self.added_length += other.added_length;
        self.removed_length += other.removed_length;
        self.reattach_delta += other.reattach_delta;
        self.parity_fixes.extend(other.parity_fixes);
        self.moved_points.extend(other.moved_points);
        self.length_change = match (self.length_change, other.length_change) {
            (Some(Ordering::Equal), x) | (x, Some(Ordering::Equal)) => x,
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        };
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum RepairError {
    #[error("cut coordinate is neither a grid nor a half-grid value")]
    OffGrid,
    #[error("repair structure leaves the window {0:?}")]
    OutsideWindow(Window),
    #[error("odd-degree vertices off the repair structure")]
    Parity,
    #[error("no grid line beside the cut visits every region of the span")]
    NoVisitingSegment,
    #[error("no edge in the window to connect to")]
    NothingToConnect,
}

#[cfg(test)]
mod tests;
