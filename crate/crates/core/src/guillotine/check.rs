//! Search for a guillotine decomposition certificate.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::geom::{clip_segment, qi, to_f64, Cut, Orientation, Polygon, Segment, Window, Q};
use crate::instance::GridSpec;
use crate::span::{classify_cut, edges_meeting, is_m_good, region_endpoints, span_of, SpanReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionGoodVariant {
    /// The M-region-span is contained in the edge set.
    SpanInE,
    /// No two regions meeting the M-region-span are visited only on opposite sides.
    BothSidesObligation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSet {
    HalfGrid,
    GridOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseCase {
    /// No edge has its open interior inside the open window.
    Modified,
    /// No closed edge lies inside the open window (documentation only).
    Legacy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOptions {
    pub variant: RegionGoodVariant,
    pub candidates: CandidateSet,
    pub base_case: BaseCase,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { variant: RegionGoodVariant::SpanInE, candidates: CandidateSet::HalfGrid, base_case: BaseCase::Modified }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum GuillotineCertificate {
    Leaf { window: Window },
    Cut { window: Window, report: Box<SpanReport>, low: Box<GuillotineCertificate>, high: Box<GuillotineCertificate> },
}

impl GuillotineCertificate {
    pub fn window(&self) -> &Window {
        match self {
            GuillotineCertificate::Leaf { window } | GuillotineCertificate::Cut { window, .. } => window,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            GuillotineCertificate::Leaf { .. } => 1,
            GuillotineCertificate::Cut { low, high, .. } => 1 + low.node_count() + high.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            GuillotineCertificate::Leaf { .. } => 0,
            GuillotineCertificate::Cut { low, high, .. } => 1 + low.depth().max(high.depth()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CheckOutcome {
    Certified { certificate: GuillotineCertificate },
    /// A window where no candidate cut is both m-good and region-good.
    Refused { witness: Window },
}

impl CheckOutcome {
    pub fn certificate(&self) -> Option<&GuillotineCertificate> {
        match self {
            CheckOutcome::Certified { certificate } => Some(certificate),
            CheckOutcome::Refused { .. } => None,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CheckError {
    #[error("recursion depth {depth} exceeds the termination bound {bound}")]
    DepthExceeded { depth: usize, bound: usize },
}

/// Termination bound `4 (log_{4/3}(extent/δ) + extent/δ)` for a root window.
pub fn depth_bound(window: &Window, spacing: &Q) -> usize {
    let w = window.width();
    let h = window.height();
    let ext = if w > h { w } else { h };
    let r = to_f64(&(ext / spacing)).max(1.0);
    (4.0 * (r.ln() / (4.0f64 / 3.0).ln() + r)).ceil().to_usize().unwrap_or(usize::MAX)
}

pub fn base_case_holds(window: &Window, edges: &[Segment], base: BaseCase) -> bool {
    match base {
        BaseCase::Modified => !edges.iter().any(|e| window.contains_segment_interior(e)),
        BaseCase::Legacy => !edges.iter().any(|e| window.contains_open(&e.a) && window.contains_open(&e.b)),
    }
}

/// Candidate cuts ordered middle-out: nearest to the window centre first,
/// vertical before horizontal, then smaller coordinate.
pub fn ordered_candidates(window: &Window, grid: &GridSpec, set: CandidateSet) -> Vec<Cut> {
    let step = match set {
        CandidateSet::HalfGrid => &grid.spacing / qi(2),
        CandidateSet::GridOnly => grid.spacing.clone(),
    };
    let mut out: Vec<(Q, Orientation, Q)> = Vec::new();
    for o in [Orientation::Vertical, Orientation::Horizontal] {
        let (lo, hi) = window.across_range(o);
        let origin = match o {
            Orientation::Vertical => &grid.origin.x,
            Orientation::Horizontal => &grid.origin.y,
        };
        let centre = (lo + hi) / qi(2);
        let mut c = crate::geom::rational::floor_to(lo, origin, &step) + &step;
        while &c < hi {
            let d = if c > centre { &c - &centre } else { &centre - &c };
            out.push((d, o, c.clone()));
            c += &step;
        }
    }
    out.sort();
    out.into_iter().map(|(_, o, c)| Cut::new(o, c, window.clone()).expect("candidate strictly inside")).collect()
}

/// Region-goodness of a cut under the selected definition.
pub fn region_good(cut: &Cut, edges: &[Segment], regions: &[Polygon], big_m: usize, variant: RegionGoodVariant) -> bool {
    let Some((a, b)) = span_of(&region_endpoints(cut, regions), big_m) else {
        return true;
    };
    match variant {
        RegionGoodVariant::SpanInE => crate::span::covered_by_edges(cut, edges, &a, &b),
        RegionGoodVariant::BothSidesObligation => {
            let span = cut.segment(&a, &b);
            let (low, high) = cut.window.split(cut);
            let touched: Vec<&Polygon> = regions.iter().filter(|r| r.meets_segment(&span)).collect();
            let sides: Vec<(bool, bool)> =
                touched.iter().map(|r| (visits_within(&low, edges, r), visits_within(&high, edges, r))).collect();
            obligation_holds(&sides)
        }
    }
}

/// For every region missed on one side, all other regions are visited on the other.
pub fn obligation_holds(sides: &[(bool, bool)]) -> bool {
    for (i, &(lo, hi)) in sides.iter().enumerate() {
        for (j, &(lo2, hi2)) in sides.iter().enumerate() {
            if i == j {
                continue;
            }
            if (!lo && !hi2) || (!hi && !lo2) {
                return false;
            }
        }
    }
    true
}

/// Whether some edge meets `region ∩ window` (all sets closed).
pub fn visits_within(window: &Window, edges: &[Segment], region: &Polygon) -> bool {
    edges.iter().any(|e| clip_segment(window, e).is_some_and(|c| region.meets_segment(&c)))
}

struct Checker<'a> {
    regions: &'a [Polygon],
    grid: &'a GridSpec,
    m: usize,
    big_m: usize,
    opts: &'a CheckOptions,
    bound: usize,
    failed: HashMap<Window, Window>,
}

impl Checker<'_> {
    fn run(&mut self, window: &Window, edges: &[Segment], depth: usize) -> Result<Result<GuillotineCertificate, Window>, CheckError> {
        if base_case_holds(window, edges, self.opts.base_case) {
            return Ok(Ok(GuillotineCertificate::Leaf { window: window.clone() }));
        }
        if depth > self.bound {
            return Err(CheckError::DepthExceeded { depth, bound: self.bound });
        }
        if let Some(w) = self.failed.get(window) {
            return Ok(Err(w.clone()));
        }
        let mut witness: Option<Window> = None;
        for cut in ordered_candidates(window, self.grid, self.opts.candidates) {
            if !is_m_good(&cut, edges, self.m) || !region_good(&cut, edges, self.regions, self.big_m, self.opts.variant) {
                continue;
            }
            let (lw, hw) = window.split(&cut);
            let le = edges_meeting(&lw, edges);
            let low = match self.run(&lw, &le, depth + 1)? {
                Ok(c) => c,
                Err(w) => {
                    witness.get_or_insert(w);
                    continue;
                }
            };
            let he = edges_meeting(&hw, edges);
            let high = match self.run(&hw, &he, depth + 1)? {
                Ok(c) => c,
                Err(w) => {
                    witness.get_or_insert(w);
                    continue;
                }
            };
            let (report, _) = classify_cut(&cut, edges, self.regions, self.m, self.big_m);
            return Ok(Ok(GuillotineCertificate::Cut {
                window: window.clone(),
                report: Box::new(report),
                low: Box::new(low),
                high: Box::new(high),
            }));
        }
        let w = witness.unwrap_or_else(|| window.clone());
        self.failed.insert(window.clone(), w.clone());
        Ok(Err(w))
    }
}

/// Decides the (m, M)-guillotine property of `edges` inside `window`.
///
/// Cuts are tried in [`ordered_candidates`] order; the first cut whose two
/// halves both certify is accepted, with failed windows memoised.
pub fn check_guillotine(
    edges: &[Segment],
    regions: &[Polygon],
    window: &Window,
    grid: &GridSpec,
    m: usize,
    big_m: usize,
    opts: &CheckOptions,
) -> Result<CheckOutcome, CheckError> {
    let mut checker = Checker { regions, grid, m, big_m, opts, bound: depth_bound(window, &grid.spacing), failed: HashMap::new() };
    let edges = edges_meeting(window, edges);
    Ok(match checker.run(window, &edges, 0)? {
        Ok(certificate) => CheckOutcome::Certified { certificate },
        Err(witness) => CheckOutcome::Refused { witness },
    })
}

/// Re-validates a certificate tree against an edge set.
pub fn verify_certificate(
    cert: &GuillotineCertificate,
    edges: &[Segment],
    regions: &[Polygon],
    m: usize,
    big_m: usize,
    opts: &CheckOptions,
) -> bool {
    match cert {
        GuillotineCertificate::Leaf { window } => base_case_holds(window, &edges_meeting(window, edges), opts.base_case),
        GuillotineCertificate::Cut { window, report, low, high } => {
            let cut = &report.cut;
            if &cut.window != window || low.window() != &window.split(cut).0 || high.window() != &window.split(cut).1 {
                return false;
            }
            let local = edges_meeting(window, edges);
            is_m_good(cut, &local, m)
                && region_good(cut, &local, regions, big_m, opts.variant)
                && verify_certificate(low, edges, regions, m, big_m, opts)
                && verify_certificate(high, edges, regions, m, big_m, opts)
        }
    }
}
