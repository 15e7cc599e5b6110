use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    #[error("relation is not monotone")]
    NotMonotone,

    #[error("relation is not resistive")]
    NotResistive,

    #[error("map is not a contraction (operator norm {0})")]
    NotContraction(f64),

    #[error("contraction is only defined on a {domain}-dimensional subspace of K^{ambient}")]
    PartialDomain { domain: usize, ambient: usize },

    #[error("maximal extension failed verification: {0}")]
    ExtensionFailed(String),

    #[error("relation is not maximal for the requested flavor: {0}")]
    NotMaximal(String),

    #[error("relation does not have the requested structure: {0}")]
    FlavorMismatch(String),

    #[error("pair is not a member of the relation (residual {residual:e})")]
    NotMember { residual: f64 },

    #[error("trajectory is missing channel `{0}`")]
    MissingChannel(String),

    #[error("not a valid geometric port-Hamiltonian system: {0}")]
    NotGeometric(String),

    #[error("not a valid port-Hamiltonian descriptor system: {0}")]
    NotDescriptor(String),

    #[error("initial data is inconsistent with the Lagrange structure (residual {0:e})")]
    InconsistentInitial(f64),

    #[error("ker E and ker Q intersect nontrivially (dimension {0})")]
    KernelOverlap(usize),

    #[error("dissipation block [[R, P], [P*, S]] is not positive semidefinite (min eigenvalue {0:e})")]
    IndefiniteDissipation(f64),

    #[error("trajectory residual {residual:e} exceeds tolerance {tol:e} at sample {sample}")]
    ResidualTooLarge { residual: f64, tol: f64, sample: usize },

    #[error("no state z reproduces (x, e_L) at sample {sample} (residual {residual:e})")]
    NoConsistentZ { residual: f64, sample: usize },

    #[error("shift {0} is an eigenvalue of the pencil")]
    SingularShift(String),

    #[error("algebraic constraints cannot be satisfied (residual {0:e})")]
    InconsistentConstraints(f64),

    #[error("matrix pencil is singular: {0}")]
    IrregularPencil(String),

    #[error("operation requires Q = I, P = 0 and S = 0")]
    RequiresStandardForm,

    #[error("file format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
