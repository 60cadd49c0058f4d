//! Error type shared by every module in the crate.

/// Unified error enum for catalogue construction, state handling, dynamics
/// and campaign plumbing.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The all-zero multi-index denotes the trivial question, which is
    /// excluded from the catalogue by construction.
    #[error("question index has all-zero sites; the trivial question is not part of the catalogue")]
    AllZeroIndex,
    #[error("site value {value} at position {position} is outside the Pauli range 0..=3")]
    SiteOutOfRange { position: usize, value: u8 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("linear index {index} is outside 0..{count}")]
    LinearIndexOutOfRange { index: usize, count: usize },
    #[error("qubit count {n} is outside the supported range 1..={cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("questions {a} and {b} are complementary; composition requires compatible operands")]
    IncompatibleOperands { a: String, b: String },
    #[error("composition requires two distinct questions, got {q} twice")]
    EqualOperands { q: String },
    #[error("unknown export format {format:?}, expected \"dot\" or \"json\"")]
    UnknownFormat { format: String },
    #[error("matrix is not Hermitian: max-abs asymmetry {residual:.3e}")]
    NotHermitian { residual: f64 },
    #[error("matrix trace differs from 1 by {residual:.3e}")]
    NotUnitTrace { residual: f64 },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("state is not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e}")]
    InvalidState { min_eigenvalue: f64 },
    #[error("direction is not a unit-multiplicity question vector: residual {residual:.3e}")]
    InvalidQuestionVector { residual: f64 },
    #[error("cannot condition on an answer of probability {probability:.3e}")]
    ZeroProbabilityAnswer { probability: f64 },
    #[error("pentagon labels must differ")]
    EqualPentagons,
    #[error("pentagon label {label} is outside 1..=6")]
    BadLabel { label: usize },
    #[error("operation requires a {expected}-qubit state, got {got} qubits")]
    WrongN { expected: usize, got: usize },
    #[error("malformed parity constraint: {reason}")]
    MalformedConstraint { reason: String },
    #[error("interrogation requires at least one question")]
    EmptyQuestionSequence,
    #[error("sample count must be at least 1")]
    InvalidSampleCount,
    #[error("sample grid must be nonempty and strictly increasing")]
    InvalidSampleGrid,
    #[error("lie closure requires at least one generator")]
    EmptyGeneratorList,
}

pub type Result<T> = std::result::Result<T, Error>;
