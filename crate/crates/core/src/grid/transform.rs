//! Grid-rounded guillotine transform.

use serde::Serialize;

use super::{make_m_good, make_region_good, RepairError, RepairReport, REGION_OFFSET};
use crate::geom::{Point, Polygon, Segment, Window};
use crate::guillotine::{
    base_case_holds, depth_bound, verify_certificate, BaseCase, CandidateSet, ChargeLedger, CheckOptions, CutEntry, EdgeSet,
    GuillotineCertificate, RegionGoodVariant,
};
use crate::instance::GridSpec;
use crate::span::{candidate_count, classify_cut, edges_meeting, find_perfect_cut, SpanError};

/// The output is certified (m + GOOD_OFFSET)-good.
pub const GOOD_OFFSET: usize = 9;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GridTransformError {
    #[error("edge endpoint {0:?} is not a grid point")]
    OffGrid(Point),
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error("repair of cut {cut_id} failed: {source}")]
    Repair { cut_id: usize, source: RepairError },
    #[error("edge set is no longer {what} after cut {cut_id}")]
    Invariant { cut_id: usize, what: &'static str },
    #[error("recursion depth {depth} exceeds {bound}")]
    DepthExceeded { depth: usize, bound: usize },
    #[error("window {0:?} has no candidate cut but is not a base case")]
    Stuck(Window),
    #[error("the produced certificate does not verify")]
    CertificateInvalid,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridTransformReport {
    pub input_length: f64,
    pub output_length: f64,
    pub added_length: f64,
    pub cuts: usize,
    pub repairs: Vec<RepairReport>,
}

#[derive(Clone, Debug)]
pub struct GridTransformOutput {
    pub edges: EdgeSet,
    pub ledger: ChargeLedger,
    pub certificate: GuillotineCertificate,
    pub report: GridTransformReport,
}

struct Run<'a> {
    edges: EdgeSet,
    regions: &'a [Polygon],
    grid: &'a GridSpec,
    m: usize,
    big_m: usize,
    ledger: ChargeLedger,
    repairs: Vec<RepairReport>,
    bound: usize,
}

impl Run<'_> {
    fn local(&self, w: &Window) -> Vec<Segment> {
        edges_meeting(w, &self.edges.plain())
    }

    fn solve(&mut self, window: Window, depth: usize) -> Result<GuillotineCertificate, GridTransformError> {
        let local = self.local(&window);
        if base_case_holds(&window, &local, BaseCase::Modified) {
            return Ok(GuillotineCertificate::Leaf { window });
        }
        if depth > self.bound {
            return Err(GridTransformError::DepthExceeded { depth, bound: self.bound });
        }
        if candidate_count(&window, self.grid) == 0 {
            return Err(GridTransformError::Stuck(window));
        }
        let (report, _) = find_perfect_cut(&window, &local, self.regions, self.m, self.big_m, self.grid)?;
        let cut = report.cut;
        let cut_id = self.ledger.cuts.len();
        let fail = |source| GridTransformError::Repair { cut_id, source };
        let (e1, mut rep) = make_m_good(&self.edges, &cut, self.grid, self.m).map_err(fail)?;
        let (e2, r2) = make_region_good(&e1, self.regions, &cut, self.grid, self.big_m, REGION_OFFSET).map_err(fail)?;
        rep.absorb(r2);
        self.ledger.cuts.push(CutEntry { cut_id, cut: cut.clone(), inserted_length: rep.added_length, direct_records: Vec::new() });
        if !rep.is_noop() {
            self.edges = e2;
            let g = self.edges.planarize();
            if !g.is_connected() {
                return Err(GridTransformError::Invariant { cut_id, what: "connected" });
            }
            if !g.odd_vertices().is_empty() {
                return Err(GridTransformError::Invariant { cut_id, what: "Eulerian" });
            }
        }
        self.repairs.push(rep);
        let (lw, hw) = window.split(&cut);
        let low = self.solve(lw, depth + 1)?;
        let high = self.solve(hw, depth + 1)?;
        let now = self.local(&window);
        let (final_report, _) = classify_cut(&cut, &now, self.regions, self.m + GOOD_OFFSET, self.big_m + REGION_OFFSET);
        Ok(GuillotineCertificate::Cut { window, report: Box::new(final_report), low: Box::new(low), high: Box::new(high) })
    }
}

/// Check options matching what the grid transform certifies.
pub fn grid_check_options() -> CheckOptions {
    CheckOptions { variant: RegionGoodVariant::BothSidesObligation, candidates: CandidateSet::HalfGrid, base_case: BaseCase::Modified }
}

/// Transforms a grid-rounded tour into a grid-rounded edge set that is
/// `(m+9, M+24)`-guillotine under the both-sides region definition.
pub fn transform_grid_guillotine(
    tour: &EdgeSet,
    regions: &[Polygon],
    grid: &GridSpec,
    m: usize,
    big_m: usize,
    window: &Window,
) -> Result<GridTransformOutput, GridTransformError> {
    if let Some(p) = tour.endpoints().into_iter().find(|p| !grid.is_grid_point(p)) {
        return Err(GridTransformError::OffGrid(p));
    }
    let mut run = Run {
        edges: tour.clone(),
        regions,
        grid,
        m,
        big_m,
        ledger: ChargeLedger::new(),
        repairs: Vec::new(),
        bound: depth_bound(window, &grid.spacing),
    };
    let certificate = run.solve(window.clone(), 0)?;
    let edges = run.edges;
    if !verify_certificate(&certificate, &edges.plain(), regions, m + GOOD_OFFSET, big_m + REGION_OFFSET, &grid_check_options()) {
        return Err(GridTransformError::CertificateInvalid);
    }
    let input_length = tour.length();
    let output_length = edges.length();
    let report = GridTransformReport {
        input_length,
        output_length,
        added_length: output_length - input_length,
        cuts: run.ledger.cuts.len(),
        repairs: run.repairs,
    };
    Ok(GridTransformOutput { edges, ledger: run.ledger, certificate, report })
}
