//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("unsupported algebra family: {0}")]
    UnsupportedFamily(String),
    #[error("invalid parameters for family {family}: {reason}")]
    InvalidParams { family: String, reason: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("theta is not an involutive automorphism (residual {residual:.3e})")]
    ThetaNotInvolutive { residual: f64 },
    #[error("candidate abelian subspace is not maximal: centralizer in p has dimension {centralizer_dim}, expected {rank}")]
    NonMaximalA { centralizer_dim: usize, rank: usize },
    #[error("eigenvalue clustering is ambiguous: {0}")]
    ClusteringAmbiguity(String),
    #[error("positive root does not decompose over the simple roots: {0}")]
    DecompositionFailure(String),
    #[error("projection kernel fails the ideal check (residual {residual:.3e})")]
    IdealCheckFailure { residual: f64 },
    #[error("product of unipotent factors is not unipotent (residual {residual:.3e})")]
    NonUnipotentProduct { residual: f64 },
    #[error("basis is not closed under the bracket (residual {residual:.3e})")]
    NotClosedUnderBracket { residual: f64 },
    #[error("plane is degenerate: |X|^2|Y|^2 - <X,Y>^2 = {gram_det:.3e}")]
    DegeneratePlane { gram_det: f64 },
    #[error("finite-difference step {0} is below the cancellation floor 1e-6")]
    StepTooSmall(f64),
    #[error("function evaluation failed: {0}")]
    EvaluationFailure(String),
    #[error("no isotropic vector: g_beta has multiplicity {0} < 2")]
    NoIsotropicVector(usize),
    #[error("multiplicity mismatch: variant {variant} requires m_beta {required}, found {found}")]
    MultiplicityMismatch {
        variant: String,
        required: String,
        found: usize,
    },
    #[error("degenerate exponent s = 0 gives a constant function")]
    DegenerateS,
    #[error("order r = {0} out of range for numerical mode (max {1})")]
    OrderOutOfRange(u32, u32),
    #[error("unknown algebra id: {0}")]
    UnknownAlgebra(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, LieError>;
