//! Simulator and verification harness for a three-party quantum private
//! comparison (QPC) protocol whose quantum carrier is a pair of two-level
//! atoms evolved inside a driven single-mode cavity.
//!
//! The crate is organized in four layers:
//!
//! - [`quantum`]: fixed-size complex state vectors, the two-atom cavity
//!   evolution unitary, and Born-rule measurement with collapse.
//! - [`protocol`]: the party state machines (TP, Alice, Bob), decoy-atom
//!   insertion and the channel security check, the classical transcript, and
//!   the round-by-round comparison with early termination.
//! - [`adversary`]: channel attack strategies (intercept-resend,
//!   measure-resend, a dishonest user acting as channel attacker) and
//!   analyzers quantifying what each party can learn.
//! - [`harness`]: configuration, the seeded Monte Carlo trial runner, an
//!   exhaustive verifier for the round-arithmetic table, and report emission.
//!
//! Everything is deterministic given a 64-bit master seed; see [`rng`].

pub mod adversary;
pub mod error;
pub mod harness;
pub mod protocol;
pub mod quantum;
pub mod rng;

pub use error::{ConfigError, HarnessError, ProtocolError, QuantumError};
