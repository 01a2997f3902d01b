//! What dishonest participants can learn from the public record.

use crate::error::ProtocolError;
use crate::protocol::{KeyPair, Secret, Transcript, TrialOutcome, Verdict};

/// How a peer bit was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeakageMethod {
    /// Decoded from public announcements and the holder's own view.
    PublicDecode,
    /// Not derivable; any value would be a blind guess.
    Guess,
}

/// One peer bit a dishonest user extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LearnedBit {
    /// 1-based round index.
    pub round: usize,
    pub peer_bit: u8,
    pub method: LeakageMethod,
}

/// Everything a dishonest user can reconstruct about the peer's secret
/// from one run's transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakageReport {
    /// Peer bits learned, in round order.
    pub learned: Vec<LearnedBit>,
    /// Rounds whose comparison never happened; the corresponding peer bits
    /// stay hidden behind the early termination.
    pub unlearnable_rounds: Vec<usize>,
}

/// Replay a run from one user's view: own secret plus both keys.
///
/// For every round whose combined value TP announced, the user strips the
/// keys to get the decoded bit and XORs in the own secret bit, which yields
/// the peer's bit exactly, terminating round included. Rounds after
/// termination were never announced and stay unlearnable.
pub fn dishonest_user_leakage(
    transcript: &Transcript,
    own_secret: &Secret,
    keys: &KeyPair,
) -> Result<LeakageReport, ProtocolError> {
    let length = own_secret.len();
    let mut learned = Vec::new();
    let mut last_round = 0usize;

    for (round, combined) in transcript.tp_announcements() {
        if round == 0 || round > length || round != last_round + 1 {
            return Err(ProtocolError::TranscriptParse {
                line: 0,
                reason: format!("announcement for unexpected round {round}"),
            });
        }
        let idx = round - 1;
        let decoded = combined ^ keys.key_a(idx) ^ keys.key_b(idx);
        learned.push(LearnedBit {
            round,
            peer_bit: decoded ^ own_secret.bit(idx),
            method: LeakageMethod::PublicDecode,
        });
        last_round = round;
    }

    Ok(LeakageReport {
        learned,
        unlearnable_rounds: (last_round + 1..=length).collect(),
    })
}

/// Empirical vs. closed-form probability that TP learns the comparison
/// result before the final round resolves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpKnowledge {
    pub empirical: f64,
    pub theoretical: f64,
}

/// TP sees the run stop. Termination at any round before the last reveals
/// "not equal" to TP; a run that reaches the last round looks the same to
/// TP whether it ends equal or not. Under secrets whose bit pairs are
/// uniform and independent this happens with probability 1 − (1/2)^(L−1).
pub fn tp_knowledge(trials: &[TrialOutcome], length: usize) -> Result<TpKnowledge, ProtocolError> {
    if trials.is_empty() {
        return Err(ProtocolError::EmptyTrialSet);
    }
    let revealed = trials
        .iter()
        .filter(|t| matches!(t.verdict, Verdict::NotEqualAtRound(j) if j < length))
        .count();
    Ok(TpKnowledge {
        empirical: revealed as f64 / trials.len() as f64,
        theoretical: tp_knowledge_theoretical(length),
    })
}

/// The closed form 1 − (1/2)^(L−1).
pub fn tp_knowledge_theoretical(length: usize) -> f64 {
    1.0 - 0.5_f64.powi(length as i32 - 1)
}

/// Empirical bias |P(announced = 1 | secret = 0) − P(announced = 1 | secret = 1)|
/// over observed (announcement, secret bit) pairs. Returns 0 when either
/// secret value is unobserved (no evidence of bias).
pub fn tp_blindness_bias(pairs: &[(u8, u8)]) -> f64 {
    let mut ones = [0usize; 2];
    let mut totals = [0usize; 2];
    for &(announced, secret_bit) in pairs {
        totals[secret_bit as usize] += 1;
        ones[secret_bit as usize] += announced as usize;
    }
    if totals[0] == 0 || totals[1] == 0 {
        return 0.0;
    }
    let p0 = ones[0] as f64 / totals[0] as f64;
    let p1 = ones[1] as f64 / totals[1] as f64;
    (p0 - p1).abs()
}

/// The same bias computed exactly over the full XOR table: for either
/// secret bit, the announcement secret ⊕ measured ⊕ key takes each value on
/// exactly half of the (measured, key) combinations, so the bias is 0.
pub fn tp_blindness_exhaustive() -> f64 {
    let mut pairs = Vec::with_capacity(8);
    for secret_bit in 0..=1u8 {
        for measured in 0..=1u8 {
            for key in 0..=1u8 {
                pairs.push((secret_bit ^ measured ^ key, secret_bit));
            }
        }
    }
    tp_blindness_bias(&pairs)
}
