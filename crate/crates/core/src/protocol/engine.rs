//! The six-step comparison protocol with early termination.
//!
//! Key custody is enforced by signatures: TP-side operations
//! ([`tp_prepare_sequence`], [`tp_combine`], [`parity_code`]) never receive
//! key material, and user-side operations never receive the initial-state
//! labels. The transcript records exactly what goes over the classical
//! channel and nothing else.

use rand::Rng;

use super::decoy::{insert_decoys, remove_decoys, security_check, DecoyPlan, SecurityCheckOutcome};
use super::registry::{PairRegistry, TravelAtom};
use super::secret::{simulate_qkd_keys, Secret};
use super::transcript::{Announcer, Channel, Event, Transcript};
use crate::adversary::{apply_attack, AttackModel, EveRecord};
use crate::error::ProtocolError;
use crate::quantum::{evolve_cavity, AtomSlot, ProductLabel, TwoAtomState};
use crate::rng::rng_from_seed;

/// Final verdict of one protocol execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// All rounds decoded to 0: the secrets are equal.
    Equal,
    /// Round `i` (1-based) decoded to 1: the secrets differ at bit `i − 1`.
    NotEqualAtRound(usize),
    /// A channel check failed before any comparison round ran.
    AbortedSecurityCheck(Channel),
}

/// Everything that happened in one comparison round: the simulator's
/// omniscient view, for verification only; none of this is public.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    /// The product state TP prepared for this round.
    pub initial: ProductLabel,
    /// TP's parity code for the initial state.
    pub tp_parity: u8,
    pub secret_a: u8,
    pub secret_b: u8,
    /// Z-measurement codes of the two payload atoms.
    pub measured_a: u8,
    pub measured_b: u8,
    pub key_a: u8,
    pub key_b: u8,
    /// What each user announces: secret ⊕ measured ⊕ key.
    pub masked_a: u8,
    pub masked_b: u8,
    /// What TP announces: masked_a ⊕ masked_b ⊕ tp_parity.
    pub combined: u8,
    /// What the users decode: combined ⊕ key_a ⊕ key_b.
    pub decoded: u8,
}

/// Tunables of a single run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub decoys_per_channel: usize,
    pub threshold: f64,
    pub seed: u64,
}

impl ProtocolConfig {
    /// Defaults: one decoy per payload atom and a zero error threshold,
    /// which is the right setting for the ideal simulated channel.
    pub fn default_for(length: usize, seed: u64) -> Self {
        ProtocolConfig {
            decoys_per_channel: length.max(1),
            threshold: 0.0,
            seed,
        }
    }
}

/// Result of one full protocol execution.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub verdict: Verdict,
    /// One record per executed comparison round; empty if aborted.
    pub rounds: Vec<RoundRecord>,
    pub decoy_check_a: SecurityCheckOutcome,
    pub decoy_check_b: SecurityCheckOutcome,
    pub transcript: Transcript,
    /// The attacker's private notes, when an attack ran. Never part of the
    /// transcript.
    pub eve_records: Vec<EveRecord>,
}

/// TP's parity code: 0 for gg/ee, 1 for ge/eg.
pub fn parity_code(label: ProductLabel) -> u8 {
    label.z_parity()
}

/// TP draws the carrier sequence: uniform labels with their product states.
/// The labels stay with TP; only the atoms travel.
pub fn tp_prepare_sequence(
    length: usize,
    rng: &mut impl Rng,
) -> Vec<(ProductLabel, TwoAtomState)> {
    (0..length)
        .map(|_| {
            let label = ProductLabel::ALL[rng.random_range(0..4)];
            (label, TwoAtomState::product(label))
        })
        .collect()
}

/// Run each pair through the cavity and split the halves into the two
/// travel sequences. Handle `i` of each sequence belongs to round `i + 1`;
/// both handles of a pair resolve to the same registry entry.
pub fn evolve_and_split(
    sequence: &[(ProductLabel, TwoAtomState)],
    registry: &mut PairRegistry,
) -> Result<(Vec<TravelAtom>, Vec<TravelAtom>), ProtocolError> {
    let mut travel_a = Vec::with_capacity(sequence.len());
    let mut travel_b = Vec::with_capacity(sequence.len());
    for (_, state) in sequence {
        let pair = registry.add_pair(evolve_cavity(state)?);
        travel_a.push(TravelAtom::PairHalf {
            pair,
            slot: AtomSlot::A,
        });
        travel_b.push(TravelAtom::PairHalf {
            pair,
            slot: AtomSlot::B,
        });
    }
    Ok((travel_a, travel_b))
}

/// One user's side of a comparison round: measure the payload atom in Z,
/// code the outcome as a bit, and mask it with the secret and key bits.
/// Only the returned masked value may be announced.
pub fn user_round(
    registry: &mut PairRegistry,
    atom: &TravelAtom,
    secret_bit: u8,
    key_bit: u8,
    rng: &mut impl Rng,
) -> Result<(u8, u8), ProtocolError> {
    let (pair, slot) = match atom {
        TravelAtom::PairHalf { pair, slot } => (*pair, *slot),
        TravelAtom::Decoy(_) => return Err(ProtocolError::UnexpectedDecoy),
    };
    let measured = registry.round_measure(pair, slot, rng)?.bit();
    Ok((measured, secret_bit ^ measured ^ key_bit))
}

/// TP's side of a round: combine the two user announcements with the
/// initial state's parity code.
pub fn tp_combine(masked_a: u8, masked_b: u8, label: ProductLabel) -> u8 {
    masked_a ^ masked_b ^ parity_code(label)
}

/// The users' final step: strip both keys off TP's announcement. The result
/// equals the XOR of the two compared secret bits.
pub fn decode_result(combined: u8, key_a: u8, key_b: u8) -> u8 {
    combined ^ key_a ^ key_b
}

/// Execute a full comparison of two equal-length secrets.
///
/// The run aborts at a failed channel check, terminates at the first round
/// that decodes to 1, and otherwise compares all bits and declares equality.
///
/// Draw order on the seeded stream is part of the contract: the shared
/// keys come first, then TP's labels, the two decoy plans, and finally all
/// measurements in protocol order. A user who holds the seed can replay
/// the key material exactly.
pub fn run_protocol(
    secret_a: &Secret,
    secret_b: &Secret,
    config: &ProtocolConfig,
    attack: AttackModel,
) -> Result<TrialOutcome, ProtocolError> {
    if secret_a.len() != secret_b.len() {
        return Err(ProtocolError::SecretLengthMismatch {
            left: secret_a.len(),
            right: secret_b.len(),
        });
    }
    if config.decoys_per_channel == 0 {
        return Err(ProtocolError::EmptyDecoySet);
    }
    let length = secret_a.len();
    let mut rng = rng_from_seed(config.seed);
    let mut transcript = Transcript::new();

    // The users' pre-shared keys; TP never touches these.
    let keys = simulate_qkd_keys(length, &mut rng)?;

    // TP prepares, evolves, and splits the carrier pairs.
    let mut registry = PairRegistry::new();
    let sequence = tp_prepare_sequence(length, &mut rng);
    let labels: Vec<ProductLabel> = sequence.iter().map(|(label, _)| *label).collect();
    let (travel_a, travel_b) = evolve_and_split(&sequence, &mut registry)?;

    // Decoys in, sequences onto the wire.
    let plan_a = DecoyPlan::random(length, config.decoys_per_channel, &mut rng);
    let plan_b = DecoyPlan::random(length, config.decoys_per_channel, &mut rng);
    let mut channel_a = insert_decoys(travel_a, &plan_a)?;
    let mut channel_b = insert_decoys(travel_b, &plan_b)?;
    for position in 0..channel_a.len() {
        transcript.push(Event::QuantumSend {
            channel: Channel::A,
            position,
        });
    }
    for position in 0..channel_b.len() {
        transcript.push(Event::QuantumSend {
            channel: Channel::B,
            position,
        });
    }

    // Whatever sits on the channel acts now, before any disclosure.
    let mut eve_records = Vec::new();
    if let Some(record) = apply_attack(attack, Channel::A, &mut channel_a, &mut registry, &mut rng)? {
        eve_records.push(record);
    }
    if let Some(record) = apply_attack(attack, Channel::B, &mut channel_b, &mut registry, &mut rng)? {
        eve_records.push(record);
    }

    // Receipt confirmed; TP discloses the plans and judges both channels.
    let decoy_check_a = disclose_and_check(
        Channel::A,
        &channel_a,
        &plan_a,
        config.threshold,
        &mut transcript,
        &mut rng,
    )?;
    let decoy_check_b = disclose_and_check(
        Channel::B,
        &channel_b,
        &plan_b,
        config.threshold,
        &mut transcript,
        &mut rng,
    )?;

    let failed_channel = if !decoy_check_a.pass {
        Some(Channel::A)
    } else if !decoy_check_b.pass {
        Some(Channel::B)
    } else {
        None
    };
    if let Some(channel) = failed_channel {
        let verdict = Verdict::AbortedSecurityCheck(channel);
        transcript.push(Event::Verdict(verdict));
        return Ok(TrialOutcome {
            verdict,
            rounds: Vec::new(),
            decoy_check_a,
            decoy_check_b,
            transcript,
            eve_records,
        });
    }

    // Decoys out; the payload sequences are back in round order.
    let payload_a = remove_decoys(channel_a, &plan_a)?;
    let payload_b = remove_decoys(channel_b, &plan_b)?;

    let mut rounds = Vec::with_capacity(length);
    for i in 1..=length {
        let idx = i - 1;
        let (secret_bit_a, key_bit_a) = (secret_a.bit(idx), keys.key_a(idx));
        let (secret_bit_b, key_bit_b) = (secret_b.bit(idx), keys.key_b(idx));

        let (measured_a, masked_a) =
            user_round(&mut registry, &payload_a[idx], secret_bit_a, key_bit_a, &mut rng)?;
        transcript.push(Event::Announce {
            round: i,
            source: Announcer::Alice,
            bit: masked_a,
        });
        let (measured_b, masked_b) =
            user_round(&mut registry, &payload_b[idx], secret_bit_b, key_bit_b, &mut rng)?;
        transcript.push(Event::Announce {
            round: i,
            source: Announcer::Bob,
            bit: masked_b,
        });

        let combined = tp_combine(masked_a, masked_b, labels[idx]);
        transcript.push(Event::Announce {
            round: i,
            source: Announcer::Tp,
            bit: combined,
        });

        let decoded = decode_result(combined, key_bit_a, key_bit_b);
        rounds.push(RoundRecord {
            round: i,
            initial: labels[idx],
            tp_parity: parity_code(labels[idx]),
            secret_a: secret_bit_a,
            secret_b: secret_bit_b,
            measured_a,
            measured_b,
            key_a: key_bit_a,
            key_b: key_bit_b,
            masked_a,
            masked_b,
            combined,
            decoded,
        });

        if decoded != 0 {
            let verdict = Verdict::NotEqualAtRound(i);
            transcript.push(Event::Verdict(verdict));
            return Ok(TrialOutcome {
                verdict,
                rounds,
                decoy_check_a,
                decoy_check_b,
                transcript,
                eve_records,
            });
        }
    }

    transcript.push(Event::Verdict(Verdict::Equal));
    Ok(TrialOutcome {
        verdict: Verdict::Equal,
        rounds,
        decoy_check_a,
        decoy_check_b,
        transcript,
        eve_records,
    })
}

fn disclose_and_check(
    channel: Channel,
    received: &[TravelAtom],
    plan: &DecoyPlan,
    threshold: f64,
    transcript: &mut Transcript,
    rng: &mut impl Rng,
) -> Result<SecurityCheckOutcome, ProtocolError> {
    transcript.push(Event::DecoyDisclosure {
        channel,
        positions: plan.positions(),
        bases: plan.entries().iter().map(|e| e.label.basis()).collect(),
    });
    let outcome = security_check(received, plan, threshold, rng)?;
    transcript.push(Event::SecurityCheckResult {
        channel,
        errors: outcome.errors,
        total: outcome.total,
        pass: outcome.pass,
    });
    Ok(outcome)
}
