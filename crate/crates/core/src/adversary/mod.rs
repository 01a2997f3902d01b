//! Channel attack strategies and participant-dishonesty analyzers.

mod analysis;
mod attack;

pub use analysis::{
    dishonest_user_leakage, tp_blindness_bias, tp_blindness_exhaustive, tp_knowledge,
    tp_knowledge_theoretical, LeakageMethod, LeakageReport, LearnedBit, TpKnowledge,
};
pub use attack::{
    apply_attack, intercept_resend, measure_resend, AttackModel, EveObservation, EveRecord,
};
