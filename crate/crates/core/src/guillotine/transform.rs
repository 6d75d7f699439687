//! Recursive perfect-cut transform producing a connected Eulerian
//! guillotine subdivision, with its charging ledger.

use num_traits::Zero;
use serde::Serialize;

use super::check::{base_case_holds, depth_bound, verify_certificate, BaseCase, CheckOptions, GuillotineCertificate};
use super::edges::{EdgeSet, Provenance};
use super::ledger::{ChargeKind, ChargeLedger, ChargeRecord, ChargeTarget, CutEntry};
use super::witness::{witnesses, Item};
use crate::geom::{clip_segment, format_q, qi, segment_distance_sq, Cut, Point, Polygon, Segment, Window, Q};
use crate::instance::GridSpec;
use crate::span::{classify_cut, covered_by_edges, edges_meeting, half_of, m_span, region_dark_portions, region_span, SpanError};

/// Region-span parameter offset used by the transform.
pub const REGION_SPAN_OFFSET: usize = 24;

/// Assembled constant of the length bound `(64/m + K/M) L`.
///
/// Inserted length before doubling is at most the charge: `32/m` per unit of
/// tour length and `16/M` per unit of region boundary. With `k` unit disks the
/// boundary is `2πk`, and `2πk · C/M <= 36 C/M · L*` for `k >= 20` (lower bound
/// on `L*`), so `C = 16` gives `576/M`. Parity doubling makes `64/m + 1152/M`.
pub const RATIO_K: i64 = 1152;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformOptions {
    /// Enforce the `(64/m + K/M)` length bound; needs m >= 32, M >= 24, k >= 20.
    pub paper_regime: bool,
    /// Check connectivity and parity after every cut, not only at the end.
    pub check_each_step: bool,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions { paper_regime: false, check_each_step: true }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TransformError {
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error("cut {cut_id}: nearest edge is {distance_sq} squared away from the region-span, above 4")]
    ConnectorTooLong { cut_id: usize, distance_sq: String },
    #[error("cut {cut_id}: edge set is no longer {what}")]
    Invariant { cut_id: usize, what: &'static str },
    #[error("recursion depth {depth} exceeds the termination bound {bound}")]
    DepthExceeded { depth: usize, bound: usize },
    #[error("window {0:?} still holds an edge but admits no candidate cut")]
    Stuck(Window),
    #[error("added length {added} exceeds the bound {bound}")]
    RatioExceeded { added: f64, bound: f64 },
    #[error("the transform's own decomposition does not certify the output")]
    CertificateInvalid,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformReport {
    pub input_length: f64,
    pub output_length: f64,
    pub added_length: f64,
    pub cuts: usize,
    pub connectors: usize,
    /// `(64/m + K/M)·input` when `paper_regime` is set.
    pub ratio_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformOutput {
    pub edges: EdgeSet,
    pub ledger: ChargeLedger,
    pub certificate: GuillotineCertificate,
    pub report: TransformReport,
}

struct Run<'a> {
    edges: EdgeSet,
    /// What each segment is, with parity duplicates resolved to their copy.
    base: Vec<Provenance>,
    regions: &'a [Polygon],
    grid: &'a GridSpec,
    m: usize,
    big_m: usize,
    opts: &'a TransformOptions,
    ledger: ChargeLedger,
    next_cut: usize,
    connectors: usize,
    bound: usize,
}

impl Run<'_> {
    fn insert_doubled(&mut self, s: Segment, p: Provenance, cut_id: usize) {
        self.edges.push(s.clone(), p, Some(cut_id));
        self.base.push(p);
        self.edges.push(s, Provenance::ParityDuplicate, Some(cut_id));
        self.base.push(p);
    }

    fn window_edges(&self, w: &Window) -> Vec<Segment> {
        edges_meeting(w, &self.edges.plain())
    }

    fn solve(&mut self, window: Window, depth: usize) -> Result<GuillotineCertificate, TransformError> {
        let local = self.window_edges(&window);
        if base_case_holds(&window, &local, BaseCase::Modified) {
            return Ok(GuillotineCertificate::Leaf { window });
        }
        if depth > self.bound {
            return Err(TransformError::DepthExceeded { depth, bound: self.bound });
        }
        if crate::span::candidate_count(&window, self.grid) == 0 {
            return Err(TransformError::Stuck(window));
        }
        let (report, _) = crate::span::find_perfect_cut(&window, &local, self.regions, self.m, self.big_m, self.grid)?;
        let cut = report.cut.clone();
        let cut_id = self.next_cut;
        self.next_cut += 1;
        self.apply_cut(&cut, cut_id, &local)?;
        let (lw, hw) = window.split(&cut);
        let low = self.solve(lw, depth + 1)?;
        let high = self.solve(hw, depth + 1)?;
        let local = self.window_edges(&window);
        let (final_report, _) = classify_cut(&cut, &local, self.regions, self.m, self.big_m + REGION_SPAN_OFFSET);
        Ok(GuillotineCertificate::Cut { window, report: Box::new(final_report), low: Box::new(low), high: Box::new(high) })
    }

    fn apply_cut(&mut self, cut: &Cut, cut_id: usize, local: &[Segment]) -> Result<(), TransformError> {
        let ins = cut_insertions(cut, cut_id, local, self.regions, self.m, self.big_m)?;
        let inserted = ins.length();
        for (s, p) in ins.segments {
            if p == Provenance::Connector {
                self.connectors += 1;
            }
            self.insert_doubled(s, p, cut_id);
        }
        self.ledger.cuts.push(CutEntry { cut_id, cut: cut.clone(), inserted_length: inserted, direct_records: Vec::new() });
        if inserted > 0.0 {
            self.charge(cut, cut_id, local);
            if self.opts.check_each_step {
                let g = self.edges.planarize();
                if !g.is_connected() {
                    return Err(TransformError::Invariant { cut_id, what: "connected" });
                }
                if !g.odd_vertices().is_empty() {
                    return Err(TransformError::Invariant { cut_id, what: "Eulerian" });
                }
            }
        }
        Ok(())
    }

    fn charge(&mut self, cut: &Cut, cut_id: usize, local_before: &[Segment]) {
        let (report, _) = classify_cut(cut, local_before, self.regions, self.m, self.big_m);
        // edges: 8/(2m) per unit length on up to m crossing edges per side
        let items: Vec<Item> = self
            .edges
            .segments
            .iter()
            .enumerate()
            .filter(|(_, t)| local_before.contains(&t.segment) && t.cut_id != Some(cut_id))
            .map(|(i, t)| Item {
                key: i,
                side: 0,
                segment: t.segment.clone(),
                priority: if t.provenance == Provenance::Original { 0 } else { 1 },
            })
            .collect();
        let edge_rate = Q::new(8.into(), ((2 * self.m) as i64).into());
        for w in witnesses(cut, &items, &report.dark_segments, self.m, true) {
            let tagged = &self.edges.segments[w.key];
            match tagged.cut_id {
                None => self.ledger.push_direct(ChargeRecord {
                    target: ChargeTarget::Edge { edge: w.key, t0: w.t0, t1: w.t1 },
                    amount: edge_rate.clone(),
                    kind: ChargeKind::Direct,
                    direction: w.direction,
                    cut_id,
                    length: w.length,
                }),
                Some(payer) => {
                    let charge = crate::geom::to_f64(&edge_rate) * w.length;
                    let prov = self.base[w.key];
                    self.ledger.pass_on(prov, cut_id, payer, w.direction, charge);
                }
            }
        }
        // regions: 8/M per unit boundary on the M/2 nearest crossings per side
        let half = half_of(self.big_m);
        let dark = region_dark_portions(cut, self.regions, half);
        let items: Vec<Item> = self
            .regions
            .iter()
            .enumerate()
            .flat_map(|(r, p)| p.edges().enumerate().map(move |(s, seg)| Item { key: r, side: s, segment: seg, priority: 0 }).collect::<Vec<_>>())
            .collect();
        let region_rate = Q::new(8.into(), (self.big_m as i64).into());
        for w in witnesses(cut, &items, &dark, half, false) {
            self.ledger.push_direct(ChargeRecord {
                target: ChargeTarget::RegionBoundary { region: w.key, side: w.side, t0: w.t0, t1: w.t1 },
                amount: region_rate.clone(),
                kind: ChargeKind::Direct,
                direction: w.direction,
                cut_id,
                length: w.length,
            });
        }
    }
}

/// Segments one perfect cut adds before parity doubling.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CutInsertions {
    pub segments: Vec<(Segment, Provenance)>,
}

impl CutInsertions {
    pub fn length(&self) -> f64 {
        self.segments.iter().map(|(s, _)| s.length()).sum()
    }

    pub fn connector(&self) -> Option<&Segment> {
        self.segments.iter().find(|(_, p)| *p == Provenance::Connector).map(|(s, _)| s)
    }
}

/// The m-span and `(M+24)`-region-span of `cut` that are not yet covered,
/// plus a connector when the region-span does not touch the edges.
pub fn cut_insertions(
    cut: &Cut,
    cut_id: usize,
    local: &[Segment],
    regions: &[Polygon],
    m: usize,
    big_m: usize,
) -> Result<CutInsertions, TransformError> {
    let mut out = CutInsertions::default();
    let mut now = local.to_vec();
    if let Some(span) = m_span(cut, local, m) {
        if !covered_by_edges(cut, local, cut.along(&span.a), cut.along(&span.b)) {
            now.push(span.clone());
            out.segments.push((span, Provenance::MSpan));
        }
    }
    if let Some(rs) = region_span(cut, regions, big_m + REGION_SPAN_OFFSET) {
        if !covered_by_edges(cut, &now, cut.along(&rs.a), cut.along(&rs.b)) {
            let c = connector(cut, cut_id, &rs, &now)?;
            now.push(rs.clone());
            out.segments.push((rs, Provenance::RegionSpan));
            if let Some(c) = c {
                now.push(c.clone());
                out.segments.push((c, Provenance::Connector));
            }
        }
    }
    // the region-span can merge components and move the m-span
    while let Some(s) = m_span(cut, &now, m) {
        if covered_by_edges(cut, &now, cut.along(&s.a), cut.along(&s.b)) {
            break;
        }
        now.push(s.clone());
        out.segments.push((s, Provenance::MSpan));
    }
    Ok(out)
}


/// Nearest point of the existing edges in the window; `None` if touching.
fn connector(cut: &Cut, cut_id: usize, rs: &Segment, edges: &[Segment]) -> Result<Option<Segment>, TransformError> {
    let mut best: Option<(Q, Point, Point)> = None;
    for e in edges {
        let Some(c) = clip_segment(&cut.window, e) else { continue };
        let (d, on_span, on_edge) = segment_distance_sq(rs, &c);
        let better = match &best {
            None => true,
            Some((bd, _, bq)) => d < *bd || (d == *bd && on_edge < *bq),
        };
        if better {
            best = Some((d, on_span, on_edge));
        }
    }
    let Some((d, a, b)) = best else {
        return Err(TransformError::ConnectorTooLong { cut_id, distance_sq: "inf".into() });
    };
    if d > qi(4) {
        return Err(TransformError::ConnectorTooLong { cut_id, distance_sq: format_q(&d) });
    }
    Ok(if d.is_zero() { None } else { Some(Segment::new(a, b)) })
}

/// Runs the transform on a tour inside `window` (normally its bounding box).
///
/// Each window gets a perfect half-grid cut; its m-span and
/// `(M+24)`-region-span are inserted twice, and a doubled connector joins a
/// detached region-span to the nearest edge point within the window.
pub fn transform_to_guillotine(
    tour: &EdgeSet,
    regions: &[Polygon],
    m: usize,
    big_m: usize,
    window: &Window,
    grid: &GridSpec,
    opts: &TransformOptions,
) -> Result<TransformOutput, TransformError> {
    let mut run = Run {
        edges: tour.clone(),
        base: tour.segments.iter().map(|t| t.provenance).collect(),
        regions,
        grid,
        m,
        big_m,
        opts,
        ledger: ChargeLedger::new(),
        next_cut: 0,
        connectors: 0,
        bound: depth_bound(window, &grid.spacing),
    };
    let certificate = run.solve(window.clone(), 0)?;
    let out = run.edges;
    let check = CheckOptions::default();
    if !verify_certificate(&certificate, &out.plain(), regions, m, big_m + REGION_SPAN_OFFSET, &check) {
        return Err(TransformError::CertificateInvalid);
    }
    let input_length = tour.length();
    let output_length = out.length();
    let added = output_length - input_length;
    let ratio_bound = opts.paper_regime.then(|| (64.0 / m as f64 + RATIO_K as f64 / big_m as f64) * input_length);
    if let Some(b) = ratio_bound {
        if added > b + super::ledger::LENGTH_TOLERANCE {
            return Err(TransformError::RatioExceeded { added, bound: b });
        }
    }
    let report = TransformReport {
        input_length,
        output_length,
        added_length: added,
        cuts: run.next_cut,
        connectors: run.connectors,
        ratio_bound,
    };
    Ok(TransformOutput { edges: out, ledger: run.ledger, certificate, report })
}
