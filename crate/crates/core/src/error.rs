use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("basis index {index} out of range for {n_qubits} qubits")]
    BasisIndexOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit {0} used more than once in a single operation")]
    DuplicateQubit(usize),

    #[error("amplitude array of length {0} is not a power of two")]
    BadLength(usize),

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("gate is not unitary (max |U†U - I| = {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid compensator arguments y0={y0}, yi={yi}: need 0 < y0 <= yi")]
    BadCompensator { y0: f64, yi: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid message: {0}")]
    InvalidMessage(String),

    #[error("unknown gate name {0:?}")]
    UnknownGate(String),

    #[error("operation requires N = {expected}, got N = {got}")]
    WrongN { expected: usize, got: usize },

    #[error("block index {0} out of range")]
    BadBlock(usize),

    #[error(
        "verification failed for {what}: max |difference| = {max_diff:e} first at entry ({row}, {col})"
    )]
    VerificationFailed {
        what: String,
        max_diff: f64,
        row: usize,
        col: usize,
    },

    #[error("correction plan requested for a failure branch (ancilla = 1)")]
    FailureBranch,

    #[error("netlist parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid config field `{field}`: {msg}")]
    Config { field: String, msg: String },
}
