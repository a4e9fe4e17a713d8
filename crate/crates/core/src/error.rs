use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude vector has length {got}, expected 2^{n_qubits} = {expected}")]
    LengthMismatch {
        n_qubits: usize,
        expected: usize,
        got: usize,
    },
    #[error("state vector is zero")]
    ZeroVector,
    #[error("state norm {norm} deviates from 1 by more than {tol}")]
    NotNormalized { norm: f64, tol: f64 },
    #[error("qubit count {0} is outside the supported range")]
    QubitCount(usize),
    #[error("player {player} out of range 1..={n_qubits}")]
    PlayerOutOfRange { player: usize, n_qubits: usize },
    #[error("expected {expected} items, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),
    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid strategy choice {0}, expected 1 or 2")]
    InvalidChoice(u8),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("N = {n} exceeds the cap of {cap} qubits for this operation")]
    OverCap { n: usize, cap: usize },
    #[error("product state excluded: {0}")]
    ProductState(String),
    #[error("operator assignment is not distinguishable (max off-diagonal overlap {0:e})")]
    NotDistinguishable(f64),
    #[error("search did not converge (best residual {0:e})")]
    NotConverged(f64),
    #[error("projectors are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("probability distribution invalid: {0}")]
    InvalidDistribution(String),
    #[error("malformed game: {0}")]
    MalformedGame(String),
}

pub type Result<T> = std::result::Result<T, Error>;
