//! Orthogonal least squares (OLS) sparse recovery with exact certificates.
//!
//! The crate provides the OLS solver with two equivalent selection rules,
//! an exact restricted-isometry oracle based on subset enumeration, explicit
//! extremal constructions, numerical checks of the recovery analysis, and a
//! Monte-Carlo experiment harness.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*F64` / `*F32` aliases below name the common instantiations.

pub mod checker;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod model;
pub mod ols;
pub mod random;
pub mod rip;
pub mod scalar;

pub use checker::{GuaranteeChecker, Suite};
pub use constructions::{compute_ck, counterexample, gram_to_matrix, tightness_example, GramSpec};
pub use error::{Error, Result};
pub use experiment::{run_boundary_sweep, run_phase_experiment, ExperimentConfig, PhaseCell};
pub use linalg::Matrix;
pub use model::{
    IterationRecord, OlsTrace, RipEstimate, SelectionRule, SensingMatrix, SparseSignal, SupportSet,
    ValidationReport,
};
pub use ols::{
    identify_projection, identify_ratio, least_squares_on_support, project_complement, run_ols,
};
pub use random::{SignalModel, RNG_ALGORITHM};
pub use rip::{exact_rip_constant, modified_rip_check, monotonicity_audit, rip_definition_spot_check};
pub use scalar::Real;

pub type MatrixF64 = Matrix<f64>;
pub type MatrixF32 = Matrix<f32>;
pub type SensingMatrixF64 = SensingMatrix<f64>;
pub type SensingMatrixF32 = SensingMatrix<f32>;
pub type SparseSignalF64 = SparseSignal<f64>;
pub type SparseSignalF32 = SparseSignal<f32>;
pub type OlsTraceF64 = OlsTrace<f64>;
pub type OlsTraceF32 = OlsTrace<f32>;
pub type RipEstimateF64 = RipEstimate<f64>;
pub type RipEstimateF32 = RipEstimate<f32>;
pub type GramSpecF64 = GramSpec<f64>;
pub type GramSpecF32 = GramSpec<f32>;
