//! Sparsification: rewrite an instance so that every binary argument has
//! `O(log N)` digits, with one certificate per step.

pub mod census;
pub mod certificate;
pub mod instance;
pub mod sparsify;
pub mod steps;

pub use census::{census, census_range, count_for_side, enumerate_field, naf_count, CensusBudget, CensusRow, CensusTable};
pub use certificate::{ReductionCertificate, StepKind, Verdict};
pub use instance::{InstanceError, ProblemInstance, COUPLING_DEGREE};
pub use sparsify::{apply_certificate, audit_certificate, replay, sparsify, Outcome, ReductionError, SparseInstance};
pub use steps::{
    forced_instance, reduce_fractional_coupling, reduce_fractional_thresholds, reduce_integer_coupling,
    reduce_integer_thresholds, StepOutput,
};
