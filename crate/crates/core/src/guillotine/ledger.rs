//! Charging ledger: who pays for inserted length, and its verification.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::Serialize;

use super::edges::{EdgeSet, Provenance};
use crate::geom::rational::serde_q;
use crate::geom::{format_q, qi, to_f64, Cut, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChargeKind {
    Direct,
    Indirect,
}

/// Side of the target on which the charging cut lies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
    Up,
    Down,
}

/// Parameter interval `[t0, t1]` on an original edge or a region boundary edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "on", rename_all = "snake_case")]
pub enum ChargeTarget {
    Edge {
        edge: usize,
        #[serde(with = "serde_q")]
        t0: Q,
        #[serde(with = "serde_q")]
        t1: Q,
    },
    RegionBoundary {
        region: usize,
        side: usize,
        #[serde(with = "serde_q")]
        t0: Q,
        #[serde(with = "serde_q")]
        t1: Q,
    },
}

impl ChargeTarget {
    fn interval(&self) -> (&Q, &Q) {
        match self {
            ChargeTarget::Edge { t0, t1, .. } | ChargeTarget::RegionBoundary { t0, t1, .. } => (t0, t1),
        }
    }

    fn key(&self) -> (bool, usize, usize) {
        match self {
            ChargeTarget::Edge { edge, .. } => (false, *edge, 0),
            ChargeTarget::RegionBoundary { region, side, .. } => (true, *region, *side),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChargeRecord {
    pub target: ChargeTarget,
    /// Charge per unit length of the target.
    #[serde(with = "serde_q")]
    pub amount: Q,
    pub kind: ChargeKind,
    pub direction: Direction,
    pub cut_id: usize,
    /// Euclidean length of the target interval.
    pub length: f64,
}

impl ChargeRecord {
    pub fn total(&self) -> f64 {
        to_f64(&self.amount) * self.length
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutEntry {
    pub cut_id: usize,
    pub cut: Cut,
    /// Length inserted for this cut before parity doubling.
    pub inserted_length: f64,
    pub direct_records: Vec<usize>,
}

/// A charge that landed on an inserted segment and was passed on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PassThrough {
    pub provenance: Provenance,
    pub from_cut: usize,
    pub paying_cut: usize,
    pub charge: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ChargeLedger {
    pub records: Vec<ChargeRecord>,
    pub cuts: Vec<CutEntry>,
    pub pass_throughs: Vec<PassThrough>,
    /// Inserted segments are duplicated for parity, so charges pay this multiple.
    pub doubling: u32,
    /// Indirect charge dropped below the materialisation cutoff.
    pub truncated_tail: f64,
}

/// Indirect records with a smaller per-unit amount are folded into the tail.
pub const MATERIALIZE_CUTOFF: f64 = 1e-12;
pub const LENGTH_TOLERANCE: f64 = 1e-9;

impl ChargeLedger {
    pub fn new() -> Self {
        ChargeLedger { doubling: 2, ..Default::default() }
    }

    pub fn total(&self) -> f64 {
        self.records.iter().map(ChargeRecord::total).sum::<f64>() + self.truncated_tail
    }

    pub fn push_direct(&mut self, rec: ChargeRecord) {
        let id = self.records.len();
        let cut_id = rec.cut_id;
        self.records.push(rec);
        if let Some(e) = self.cuts.iter_mut().find(|c| c.cut_id == cut_id) {
            e.direct_records.push(id);
        }
    }

    /// Passes `charge` landing on a segment inserted by `paying_cut` back to
    /// the records that paid for that cut, pro rata.
    pub fn pass_on(&mut self, provenance: Provenance, from_cut: usize, paying_cut: usize, direction: Direction, charge: f64) {
        self.pass_throughs.push(PassThrough { provenance, from_cut, paying_cut, charge });
        let Some(entry) = self.cuts.iter().find(|c| c.cut_id == paying_cut) else {
            self.truncated_tail += charge;
            return;
        };
        let payers: Vec<ChargeRecord> = entry.direct_records.iter().map(|&i| self.records[i].clone()).collect();
        let paid: f64 = payers.iter().map(ChargeRecord::total).sum();
        if paid <= 0.0 {
            self.truncated_tail += charge;
            return;
        }
        for p in payers {
            let amount = to_f64(&p.amount) * charge / paid;
            if amount < MATERIALIZE_CUTOFF {
                self.truncated_tail += amount * p.length;
                continue;
            }
            let amount = BigRational::from_f64(amount).unwrap_or_else(Q::zero);
            self.records.push(ChargeRecord { amount, kind: ChargeKind::Indirect, direction, cut_id: from_cut, ..p });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "assertion", rename_all = "snake_case")]
pub enum LedgerViolation {
    /// (i) inserted length exceeds what the ledger pays for.
    Uncovered { added_length: f64, paid: f64 },
    /// (ii) more than one direct record from one direction on an edge point.
    RepeatedDirection { cut_id: usize, edge: usize, direction: Direction, at: String },
    /// (ii) per-point edge charge above the bound.
    EdgeCharge { cut_id: usize, edge: usize, at: String, charge: String, bound: String, kind: &'static str },
    /// (iii) per-point region boundary charge above the bound.
    RegionCharge { cut_id: usize, region: usize, side: usize, at: String, charge: String, bound: String },
    /// (iv) a span segment received charge.
    SpanCharged { cut_id: usize, provenance: Provenance },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerReport {
    pub added_length: f64,
    pub paid: f64,
    pub max_direct_edge_charge: String,
    pub max_edge_charge: String,
    pub max_region_charge: String,
    /// The total-charge bound 32/m is only asserted for m >= 32.
    pub edge_total_bound_checked: bool,
    pub violations: Vec<LedgerViolation>,
}

impl LedgerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Pieces of a target on which a fixed set of records is active.
fn sweep(records: &[&ChargeRecord]) -> Vec<((Q, Q), Vec<usize>)> {
    let mut ts: Vec<Q> = Vec::new();
    for r in records {
        let (a, b) = r.target.interval();
        ts.push(a.clone());
        ts.push(b.clone());
    }
    ts.sort();
    ts.dedup();
    let mut out = Vec::new();
    for w in ts.windows(2) {
        let mid = (&w[0] + &w[1]) / qi(2);
        let active: Vec<usize> = records
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                let (a, b) = r.target.interval();
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                lo < &mid && &mid < hi
            })
            .map(|(i, _)| i)
            .collect();
        if !active.is_empty() {
            out.push(((w[0].clone(), w[1].clone()), active));
        }
    }
    out
}

/// Checks the four ledger assertions for one transform run.
pub fn verify_ledger(ledger: &ChargeLedger, before: &EdgeSet, after: &EdgeSet, m: usize, big_m: usize) -> LedgerReport {
    let added_length = after.length() - before.length();
    let paid = f64::from(ledger.doubling) * ledger.total();
    let mut violations = Vec::new();
    if added_length > paid + LENGTH_TOLERANCE {
        violations.push(LedgerViolation::Uncovered { added_length, paid });
    }
    let direct_bound = Q::new(16.into(), (m as i64).into());
    let total_bound = Q::new(32.into(), (m as i64).into());
    let region_bound = Q::new(16.into(), (big_m as i64).into());
    let check_total = m >= 32;
    let mut max_direct = Q::zero();
    let mut max_edge = Q::zero();
    let mut max_region = Q::zero();

    let mut groups: BTreeMap<(bool, usize, usize), Vec<&ChargeRecord>> = BTreeMap::new();
    for r in &ledger.records {
        groups.entry(r.target.key()).or_default().push(r);
    }
    for ((is_region, idx, side), recs) in groups {
        for ((a, b), active) in sweep(&recs) {
            let at = format!("[{}, {}]", format_q(&a), format_q(&b));
            let cut_id = recs[active[0]].cut_id;
            let sum: Q = active.iter().map(|&i| recs[i].amount.clone()).sum();
            if is_region {
                if sum > max_region {
                    max_region = sum.clone();
                }
                if sum > region_bound {
                    violations.push(LedgerViolation::RegionCharge {
                        cut_id,
                        region: idx,
                        side,
                        at,
                        charge: format_q(&sum),
                        bound: format_q(&region_bound),
                    });
                }
                continue;
            }
            let direct: Vec<&ChargeRecord> =
                active.iter().map(|&i| recs[i]).filter(|r| r.kind == ChargeKind::Direct).collect();
            let dsum: Q = direct.iter().map(|r| r.amount.clone()).sum();
            for d in [Direction::Left, Direction::Right, Direction::Up, Direction::Down] {
                let hits: Vec<&&ChargeRecord> = direct.iter().filter(|r| r.direction == d).collect();
                if hits.len() > 1 {
                    violations.push(LedgerViolation::RepeatedDirection { cut_id: hits[1].cut_id, edge: idx, direction: d, at: at.clone() });
                }
            }
            if dsum > max_direct {
                max_direct = dsum.clone();
            }
            if sum > max_edge {
                max_edge = sum.clone();
            }
            if dsum > direct_bound {
                violations.push(LedgerViolation::EdgeCharge {
                    cut_id,
                    edge: idx,
                    at: at.clone(),
                    charge: format_q(&dsum),
                    bound: format_q(&direct_bound),
                    kind: "direct",
                });
            }
            if check_total && sum > total_bound {
                violations.push(LedgerViolation::EdgeCharge {
                    cut_id,
                    edge: idx,
                    at,
                    charge: format_q(&sum),
                    bound: format_q(&total_bound),
                    kind: "total",
                });
            }
        }
    }
    for p in &ledger.pass_throughs {
        if matches!(p.provenance, Provenance::MSpan | Provenance::RegionSpan) {
            violations.push(LedgerViolation::SpanCharged { cut_id: p.from_cut, provenance: p.provenance });
        }
    }
    LedgerReport {
        added_length,
        paid,
        max_direct_edge_charge: format_q(&max_direct),
        max_edge_charge: format_q(&max_edge),
        max_region_charge: format_q(&max_region),
        edge_total_bound_checked: check_total,
        violations,
    }
}
