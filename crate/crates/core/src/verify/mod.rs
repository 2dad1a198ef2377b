//! Ground truth and audits.

mod audit;
mod distortion;
mod oracle;

pub use audit::{
    audit_lemmas, AuditReport, AuditScope, Lemma3Violation, Lemma4Violation, Segment,
    SegmentViolation,
};
pub use distortion::{
    measure_distortion, shortcut_errors, DistortionReport, MeasureMode, Violation,
    DEFAULT_SAMPLE_PAIRS,
};
pub use oracle::{apsp_oracle, apsp_oracle_capped, DistanceMatrix, DEFAULT_APSP_CAP};
