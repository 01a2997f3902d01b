//! The Monte Carlo trial runner.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{SecretMode, SimConfig};
use crate::adversary::tp_knowledge_theoretical;
use crate::error::HarnessError;
use crate::protocol::{run_protocol, Channel, ProtocolConfig, Secret, TrialOutcome, Verdict};
use crate::rng::{derive_stream_seed, derive_trial_seed, rng_from_seed, TrialRng};

/// A rate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub stderr: f64,
}

impl RateEstimate {
    fn from_counts(hits: usize, total: usize) -> RateEstimate {
        let rate = hits as f64 / total as f64;
        RateEstimate {
            rate,
            stderr: (rate * (1.0 - rate) / total as f64).sqrt(),
        }
    }
}

/// Verdict counts of a batch.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictHistogram {
    pub equal: usize,
    /// Keyed by the 1-based terminating round.
    pub not_equal_at_round: BTreeMap<usize, usize>,
    pub aborted_channel_a: usize,
    pub aborted_channel_b: usize,
}

impl VerdictHistogram {
    fn record(&mut self, verdict: Verdict) {
        match verdict {
            Verdict::Equal => self.equal += 1,
            Verdict::NotEqualAtRound(round) => {
                *self.not_equal_at_round.entry(round).or_insert(0) += 1;
            }
            Verdict::AbortedSecurityCheck(Channel::A) => self.aborted_channel_a += 1,
            Verdict::AbortedSecurityCheck(Channel::B) => self.aborted_channel_b += 1,
        }
    }

    pub fn aborted(&self) -> usize {
        self.aborted_channel_a + self.aborted_channel_b
    }
}

/// TP's chance of learning the comparison result mid-run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TpKnowledgeStats {
    pub empirical: f64,
    pub theoretical: f64,
}

/// Aggregated results of one batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub trials: usize,
    pub length: usize,
    pub verdicts: VerdictHistogram,
    /// Mean number of comparison rounds over non-aborted runs.
    pub mean_termination_round: Option<f64>,
    /// Mismatch rate over every decoy measured in the batch, both channels.
    pub decoy_error_rate: RateEstimate,
    /// Fraction of runs aborted by the security check.
    pub detection_rate: f64,
    /// Compared bits per consumed payload atom; absent if no run compared
    /// anything.
    pub qubit_efficiency: Option<f64>,
    pub tp_knowledge: TpKnowledgeStats,
}

impl SummaryStats {
    /// Copy with every float rounded to 6 decimals, the precision reports
    /// are emitted at.
    pub fn rounded(&self) -> SummaryStats {
        let mut out = self.clone();
        out.mean_termination_round = out.mean_termination_round.map(round6);
        out.decoy_error_rate.rate = round6(out.decoy_error_rate.rate);
        out.decoy_error_rate.stderr = round6(out.decoy_error_rate.stderr);
        out.detection_rate = round6(out.detection_rate);
        out.qubit_efficiency = out.qubit_efficiency.map(round6);
        out.tp_knowledge.empirical = round6(out.tp_knowledge.empirical);
        out.tp_knowledge.theoretical = round6(out.tp_knowledge.theoretical);
        out
    }
}

pub(crate) fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn trial_secrets(mode: &SecretMode, length: usize, rng: &mut TrialRng) -> (Secret, Secret) {
    match mode {
        SecretMode::Explicit { a, b } => (a.clone(), b.clone()),
        SecretMode::Random => {
            let a = Secret::random(length, rng).expect("length validated");
            let b = Secret::random(length, rng).expect("length validated");
            (a, b)
        }
        SecretMode::EqualPair => {
            let a = Secret::random(length, rng).expect("length validated");
            (a.clone(), a)
        }
        SecretMode::DifferAt(j) => {
            let a = Secret::random(length, rng).expect("length validated");
            let mut bits = a.bits().to_vec();
            bits[j - 1] ^= 1;
            for bit in bits.iter_mut().skip(*j) {
                *bit = rng.random_range(0..=1);
            }
            let b = Secret::from_bits(bits).expect("length validated");
            (a, b)
        }
    }
}

/// Run the batch, handing each trial's outcome to `observer` before it is
/// folded into the aggregates and dropped.
pub fn run_trials_observed(
    config: &SimConfig,
    mut observer: impl FnMut(usize, &TrialOutcome),
) -> Result<SummaryStats, HarnessError> {
    config.validate()?;

    let mut verdicts = VerdictHistogram::default();
    let mut rounds_sum = 0usize;
    let mut completed = 0usize;
    let mut compared_bits = 0usize;
    let mut payload_atoms = 0usize;
    let mut decoy_errors = 0usize;
    let mut decoy_total = 0usize;
    let mut revealed_mid_run = 0usize;

    for trial in 0..config.trials {
        let trial_seed = derive_trial_seed(config.master_seed, trial as u64);
        let mut secret_rng = rng_from_seed(derive_stream_seed(trial_seed, 1));
        let (secret_a, secret_b) = trial_secrets(&config.secret_mode, config.length, &mut secret_rng);

        let protocol_config = ProtocolConfig {
            decoys_per_channel: config.decoys_per_channel,
            threshold: config.threshold,
            seed: trial_seed,
        };
        let outcome = run_protocol(&secret_a, &secret_b, &protocol_config, config.attack)?;
        observer(trial, &outcome);

        verdicts.record(outcome.verdict);
        decoy_errors += outcome.decoy_check_a.errors + outcome.decoy_check_b.errors;
        decoy_total += outcome.decoy_check_a.total + outcome.decoy_check_b.total;
        match outcome.verdict {
            Verdict::AbortedSecurityCheck(_) => {}
            Verdict::Equal | Verdict::NotEqualAtRound(_) => {
                completed += 1;
                rounds_sum += outcome.rounds.len();
                compared_bits += outcome.rounds.len();
                payload_atoms += 2 * outcome.rounds.len();
            }
        }
        if matches!(outcome.verdict, Verdict::NotEqualAtRound(j) if j < config.length) {
            revealed_mid_run += 1;
        }
    }

    Ok(SummaryStats {
        trials: config.trials,
        length: config.length,
        mean_termination_round: (completed > 0).then(|| rounds_sum as f64 / completed as f64),
        decoy_error_rate: RateEstimate::from_counts(decoy_errors, decoy_total),
        detection_rate: verdicts.aborted() as f64 / config.trials as f64,
        qubit_efficiency: (payload_atoms > 0).then(|| compared_bits as f64 / payload_atoms as f64),
        tp_knowledge: TpKnowledgeStats {
            empirical: revealed_mid_run as f64 / config.trials as f64,
            theoretical: tp_knowledge_theoretical(config.length),
        },
        verdicts,
    })
}

/// Run the batch and aggregate, discarding per-trial detail.
pub fn run_trials(config: &SimConfig) -> Result<SummaryStats, HarnessError> {
    run_trials_observed(config, |_, _| {})
}
