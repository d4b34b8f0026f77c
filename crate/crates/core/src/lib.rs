//! Translationally-invariant spin-model promise problems.
//!
//! * [`numerics`]: signed-digit fixed-precision reals and their wire format.
//! * [`models`]: Heisenberg, Ising, unit-cell, Fermi-Hubbard and t-J builders,
//!   a-priori norm bounds, and the bipartite sign conjugation.
//! * [`reduction`]: the sparsification chain with per-step certificates, and
//!   the census of sparse instances.
//! * [`spectral`]: exact-diagonalization oracle (dense and Lanczos).
//! * [`format`]: the text format for instances, certificates and operator dumps.
//! * [`verify`]: soundness checks of a chain against the oracle.

pub mod format;
pub mod models;
pub mod numerics;
pub mod reduction;
pub mod spectral;
pub mod verify;

use thiserror::Error;

pub use format::{parse_document, parse_instance, write_document, write_instance, Document, ParseError};
pub use models::{
    build_fermi_hubbard, build_heisenberg, build_ising, build_tj, build_unit_cell, norm_bound, stoquastic_transform,
    Boundary, CouplingId, LatticeGeometry, ModelError, ModelKind, ModelParams, ModelSpec, PauliSum, SparseOperator,
    SpinConvention, UnitCellSpec,
};
pub use numerics::{EncodingError, FixedPrecisionReal};
pub use reduction::{
    census, sparsify, CensusBudget, InstanceError, Outcome, ProblemInstance, ReductionCertificate, ReductionError,
    SparseInstance, Verdict,
};
pub use spectral::{
    decide_promise, ground_energy, operator_norm, weyl_check, Answer, Decision, Method, SpectralConfig, SpectralError,
    SpectralResult,
};
pub use verify::{verify_chain, verify_instance, SoundnessReport};

/// Any failure surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
