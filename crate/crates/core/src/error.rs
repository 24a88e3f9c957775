use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (anti-Hermitian residual {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("operator is not traceless (|Tr| = {0:e})")]
    NotTraceless(f64),
    #[error("target direction entirely forbidden")]
    FullyForbidden,
    #[error("integration blow-up at step {step}")]
    BlowUp { step: usize },
    #[error("unitarity lost during accumulation (residual {0:e})")]
    UnitarityLost(f64),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("operator lies outside subspace g_{j} (residual {residual:e})")]
    OutsideSubspace { j: usize, residual: f64 },
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error("identity target, T = 0")]
    IdentityTarget,
    #[error("angle {0} outside the allowed range")]
    AngleOutOfRange(f64),
    #[error("no feasible tuple within bounds; best infeasible candidate: {0}")]
    NoFeasibleTuple(String),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
