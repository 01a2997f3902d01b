//! Detection rate as a function of decoy count under intercept-resend.

use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::runner::{round6, run_trials};
use crate::adversary::AttackModel;
use crate::error::HarnessError;

/// Batch results for one decoy count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub decoys_per_channel: usize,
    pub trials: usize,
    /// Fraction of runs where the attack slipped past both checks.
    pub pass_rate: f64,
    pub detection_rate: f64,
    /// (3/4)^(2d): per-decoy escape probability compounded over both
    /// channels' decoys.
    pub theoretical_pass_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn rounded(&self) -> SweepReport {
        SweepReport {
            rows: self
                .rows
                .iter()
                .map(|r| SweepRow {
                    pass_rate: round6(r.pass_rate),
                    detection_rate: round6(r.detection_rate),
                    theoretical_pass_rate: round6(r.theoretical_pass_rate),
                    ..*r
                })
                .collect(),
        }
    }
}

/// Run one intercept-resend batch per decoy count, keeping everything else
/// from the base configuration.
pub fn attack_sweep(base: &SimConfig, decoy_counts: &[usize]) -> Result<SweepReport, HarnessError> {
    let mut rows = Vec::with_capacity(decoy_counts.len());
    for &decoys in decoy_counts {
        let mut config = base.clone();
        config.attack = AttackModel::InterceptResend;
        config.decoys_per_channel = decoys;
        let stats = run_trials(&config)?;
        rows.push(SweepRow {
            decoys_per_channel: decoys,
            trials: config.trials,
            pass_rate: 1.0 - stats.detection_rate,
            detection_rate: stats.detection_rate,
            theoretical_pass_rate: 0.75_f64.powi(2 * decoys as i32),
        });
    }
    Ok(SweepReport { rows })
}
