//! Error types for the quantum layer, the protocol engine, and the harness.

use thiserror::Error;

/// Errors raised by state construction, evolution, and measurement.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    /// A state vector failed the normalization guard.
    #[error("state is not normalized (norm deviation {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    /// A state vector contains NaN or infinite amplitudes.
    #[error("state vector contains a non-finite amplitude")]
    NonFiniteAmplitude,
}

/// Errors raised while assembling or executing a protocol run.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),

    /// Secret bit strings must be non-empty and of equal length.
    #[error("secret must contain at least one bit")]
    EmptySecret,

    #[error("secret lengths differ ({left} vs {right})")]
    SecretLengthMismatch { left: usize, right: usize },

    #[error("secret bit string contains a character other than 0 or 1")]
    InvalidSecretBit,

    /// A decoy plan that cannot be spliced into the travel sequence.
    #[error("invalid decoy plan: {reason}")]
    InvalidDecoyPlan { reason: String },

    /// The security check would be vacuous without decoys.
    #[error("security check requires at least one decoy atom")]
    EmptyDecoySet,

    /// A payload atom was consumed twice; the round order was violated.
    #[error("atom of pair {pair} (slot {slot}) was already measured")]
    DoubleMeasurement { pair: usize, slot: &'static str },

    /// A decoy atom reached a code path reserved for payload atoms.
    #[error("expected a payload atom but found a decoy")]
    UnexpectedDecoy,

    #[error("transcript line {line}: {reason}")]
    TranscriptParse { line: usize, reason: String },

    /// Analyzers need at least one trial to report statistics.
    #[error("analysis requires at least one trial")]
    EmptyTrialSet,
}

/// Anything that can stop a harness batch.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// Invalid harness configuration; maps to a CLI usage error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("length must be at least 1")]
    ZeroLength,

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("decoys per channel must be at least 1")]
    ZeroDecoys,

    #[error("threshold must lie in [0, 1], got {0}")]
    ThresholdOutOfRange(f64),

    #[error("explicit secret length {got} does not match --length {expected}")]
    SecretLengthMismatch { expected: usize, got: usize },

    #[error("differ-at index {j} outside 1..={length}")]
    DifferAtOutOfRange { j: usize, length: usize },

    #[error("{0}")]
    InvalidSecret(String),
}
