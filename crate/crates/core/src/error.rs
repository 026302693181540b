use thiserror::Error;

/// Errors raised by the algebraic, combinatorial and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("every sampled point made a denominator vanish")]
    AllPointsSingular,
    #[error("denominator vanishes at the evaluation point")]
    SingularPoint,
    #[error("matrix is not skew-symmetrizable: {0}")]
    NotSkewSymmetrizable(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("illegal quiver: {0}")]
    IllegalQuiver(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("c-vector {0:?} has entries of both signs")]
    SignIncoherent(Vec<i64>),
    #[error("c-vector is zero")]
    ZeroVector,
    #[error("mutation sequence is not reddening")]
    NotReddening,
    #[error("final C-matrix is not the negative of a permutation matrix")]
    NotSignedPermutation,
    #[error("mutation sequence is empty")]
    EmptySequence,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("mutation sequence is not fully mutated")]
    NotFullyMutated,
    #[error("block matrix alpha is not nilpotent")]
    NotNilpotent,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Jacobian in Newton step; try a different initial point")]
    SingularJacobian,
    #[error("initial point must avoid 0 and 1")]
    InvalidInit,
    #[error("gluing system is not of Dynkin shape (A+ = 2I, A- symmetric with 2 on the diagonal)")]
    NotDynkinShape,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("triangle {0} repeats an edge (self-folded edges are not supported)")]
    SelfFoldedEdge(usize),
    #[error("edge {edge} appears in {count} triangle slots, expected 2")]
    BadIncidence { edge: usize, count: usize },
    #[error("integer overflow in exchange-matrix or C-matrix arithmetic")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
