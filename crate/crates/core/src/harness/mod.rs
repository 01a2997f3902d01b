//! Configuration, the Monte Carlo trial runner, the exhaustive verifier for
//! the round-arithmetic table, and report emission.

mod config;
mod report;
mod runner;
mod sweep;
mod table1;

pub use config::{OutputFormat, SecretMode, SimConfig};
pub use report::{emit_certificate, emit_report, emit_sweep};
pub use runner::{
    run_trials, run_trials_observed, RateEstimate, SummaryStats, TpKnowledgeStats,
    VerdictHistogram,
};
pub use sweep::{attack_sweep, SweepReport, SweepRow};
pub use table1::{verify_table1, Table1Certificate, Table1Violation};

pub use crate::error::HarnessError;
