//! Guillotine property checks, the connected guillotine transform and its
//! charging ledger.

mod check;
mod edges;
mod ledger;
mod transform;
mod witness;

pub use check::{
    base_case_holds, check_guillotine, depth_bound, obligation_holds, ordered_candidates, region_good, verify_certificate,
    visits_within, BaseCase, CandidateSet, CheckError, CheckOptions, CheckOutcome, GuillotineCertificate, RegionGoodVariant,
};
pub use edges::{exact_length, planarize, EdgeSet, PlanarGraph, Provenance, TaggedSegment};
pub use ledger::{
    verify_ledger, ChargeKind, ChargeLedger, ChargeRecord, ChargeTarget, CutEntry, Direction, LedgerReport, LedgerViolation,
    PassThrough, LENGTH_TOLERANCE, MATERIALIZE_CUTOFF,
};
pub use transform::{
    cut_insertions, transform_to_guillotine, CutInsertions, TransformError, TransformOptions, TransformOutput, TransformReport, RATIO_K, REGION_SPAN_OFFSET,
};
pub use witness::{witnesses, Item, Witness};
