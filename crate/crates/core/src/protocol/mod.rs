//! Party state machines, decoy handling, the classical transcript, and the
//! round-by-round comparison with early termination.

mod decoy;
mod engine;
mod registry;
mod secret;
mod transcript;

pub use decoy::{
    insert_decoys, remove_decoys, security_check, DecoyEntry, DecoyPlan, SecurityCheckOutcome,
};
pub use engine::{
    decode_result, evolve_and_split, parity_code, run_protocol, tp_combine, tp_prepare_sequence,
    user_round, ProtocolConfig, RoundRecord, TrialOutcome, Verdict,
};
pub use registry::{PairRegistry, TravelAtom};
pub use secret::{simulate_qkd_keys, KeyPair, Secret};
pub use transcript::{Announcer, Channel, Event, Transcript};
