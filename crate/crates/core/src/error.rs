use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("gate `{gate}` expects {expected} parameter(s), got {got}")]
    ParameterCount {
        gate: String,
        expected: usize,
        got: usize,
    },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("gate of arity {arity} applied to {targets} target(s)")]
    ArityMismatch { arity: usize, targets: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("measurement outcome with probability {0:e} selected; state is inconsistent")]
    DegenerateProjection(f64),

    #[error("classical register `{0}` is used before it is measured or declared")]
    UndefinedRegister(String),

    #[error("register `{register}` has width {width}, bit {bit} requested")]
    RegisterBit {
        register: String,
        width: usize,
        bit: usize,
    },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix trace is {0}, expected 1")]
    TraceNotOne(f64),

    #[error("matrix has eigenvalue {0:e} below the positivity tolerance")]
    NotPositive(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("bit-flip correctness probability {0} outside [0.5, 1]")]
    InvalidNoise(f64),

    #[error("evidence has zero probability")]
    ZeroEvidence,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("symplectic eigenvalue {0} below 1/2 beyond tolerance")]
    SymplecticViolation(f64),

    #[error("hermite level {0} outside the supported recurrence range (0..=60)")]
    UnstableRecurrence(usize),

    #[error("basis state violates lattice constraints: {0}")]
    BasisInconsistency(String),

    #[error("circuit description could not be parsed: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
