use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Bloch vector norm {0} exceeds 1 (unphysical state)")]
    UnphysicalBloch(f64),
    #[error("matrix is not a valid density operator: {0}")]
    InvalidDensity(String),
    #[error("expected a {expected}-qubit operator, got {actual} qubits")]
    QubitCount { expected: usize, actual: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid qubit indices {indices:?} for a {n_qubits}-qubit register")]
    InvalidTargets { indices: Vec<usize>, n_qubits: usize },
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("unknown gate name `{0}`")]
    UnknownGate(String),
    #[error("rotation axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),
    #[error("preparation angle {0} outside [pi, 3pi/2]")]
    AngleOutOfRange(f64),
    #[error("polarization {0} outside [-1, 1]")]
    PolarizationOutOfRange(f64),
    #[error("Bloch vector is not parallel to the magic axis")]
    OffMagicAxis,
    #[error("no trivial-syndrome support (success probability {0:.3e})")]
    NoTrivialSyndromeSupport(f64),
    #[error("negative duration {0}")]
    NegativeTime(f64),
    #[error("dephasing time must be positive, got {0}")]
    InvalidDephasingTime(f64),
    #[error("outcome probability {0:.3e} below floor; ratio undefined")]
    ThetaBelowFloor(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
