//! Cross-module protocol invariants: exhaustive XOR-chain facts, privacy of
//! the public record, and property tests over randomized runs.

use proptest::prelude::*;

use cavity_qpc::adversary::AttackModel;
use cavity_qpc::protocol::{
    decode_result, insert_decoys, parity_code, remove_decoys, run_protocol, tp_combine, Announcer,
    Channel, DecoyEntry, DecoyPlan, Event, ProtocolConfig, Secret, Transcript, TravelAtom,
    Verdict,
};
use cavity_qpc::quantum::{
    cavity_unitary, AtomSlot, Basis, DecoyLabel, ProductLabel, TwoAtomState, AMP_THRESHOLD,
};
use cavity_qpc::rng::rng_from_seed;

/// The evolved branches of every initial state keep its parity, so the two
/// measurement codes always XOR to TP's parity code.
#[test]
fn parity_identity_holds_on_every_branch() {
    let unitary = cavity_unitary();
    for initial in ProductLabel::ALL {
        let column = unitary.column(initial.index());
        for (k, amp) in column.iter().enumerate() {
            if amp.norm() > AMP_THRESHOLD {
                let measured_a = (k >> 1) as u8;
                let measured_b = (k & 1) as u8;
                assert_eq!(measured_a ^ measured_b ^ parity_code(initial), 0);
            }
        }
    }
}

/// What TP announces is the doubly masked XOR of the secrets, independent
/// of which branch the measurement took. Exhaustive over all 128
/// configurations.
#[test]
fn tp_announcement_is_branch_independent() {
    let unitary = cavity_unitary();
    for initial in ProductLabel::ALL {
        let column = unitary.column(initial.index());
        for (k, amp) in column.iter().enumerate() {
            if amp.norm() <= AMP_THRESHOLD {
                continue;
            }
            let (measured_a, measured_b) = ((k >> 1) as u8, (k & 1) as u8);
            for secret_a in 0..=1u8 {
                for secret_b in 0..=1u8 {
                    for key_a in 0..=1u8 {
                        for key_b in 0..=1u8 {
                            let masked_a = secret_a ^ measured_a ^ key_a;
                            let masked_b = secret_b ^ measured_b ^ key_b;
                            let combined = tp_combine(masked_a, masked_b, initial);
                            assert_eq!(combined, (secret_a ^ key_a) ^ (secret_b ^ key_b));
                            assert_eq!(
                                decode_result(combined, key_a, key_b),
                                secret_a ^ secret_b
                            );
                        }
                    }
                }
            }
        }
    }
}

/// Nothing but the whitelisted event kinds and fields ever goes public.
#[test]
fn transcript_exposes_only_whitelisted_fields() {
    const KINDS: [&str; 5] = [
        "quantum-send",
        "decoy-disclosure",
        "security-check",
        "announce",
        "verdict",
    ];
    const KEYS: [&str; 12] = [
        "channel", "position", "positions", "bases", "errors", "total", "rate", "pass", "round",
        "source", "bit", "kind",
    ];

    let attacks = [
        AttackModel::None,
        AttackModel::InterceptResend,
        AttackModel::MeasureResend(Basis::Z),
        AttackModel::MeasureResend(Basis::X),
        AttackModel::DishonestAliceIntercept,
    ];
    let a = Secret::from_bit_str("101101").unwrap();
    let b = Secret::from_bit_str("101001").unwrap();
    for (i, attack) in attacks.into_iter().enumerate() {
        let config = ProtocolConfig::default_for(a.len(), 7000 + i as u64);
        let outcome = run_protocol(&a, &b, &config, attack).unwrap();
        for line in outcome.transcript.to_lines().lines() {
            let mut parts = line.split('\t');
            let kind = parts.next().unwrap();
            assert!(KINDS.contains(&kind), "unexpected event kind: {kind}");
            for pair in parts {
                let (key, value) = pair.split_once('=').expect("key=value field");
                assert!(KEYS.contains(&key), "unexpected field key: {key}");
                assert!(
                    value == "equal" || value == "not-equal" || value == "aborted"
                        || !value.chars().any(|c| c.is_ascii_alphabetic())
                        || ["a", "b", "alice", "bob", "tp", "true", "false", "z", "x"]
                            .contains(&value)
                        || value.split(',').all(|v| v == "z" || v == "x"),
                    "unexpected field value: {key}={value}"
                );
            }
        }
    }
}

/// Attacked payload atoms randomize measurement codes but never break the
/// XOR chain the users and TP actually compute.
#[test]
fn chain_identities_survive_channel_attacks() {
    let a = Secret::from_bit_str("0110").unwrap();
    let b = Secret::from_bit_str("0110").unwrap();
    for seed in 0..30 {
        let config = ProtocolConfig {
            decoys_per_channel: 4,
            threshold: 1.0, // let attacked runs through to the rounds
            seed,
        };
        let outcome = run_protocol(&a, &b, &config, AttackModel::InterceptResend).unwrap();
        for r in &outcome.rounds {
            assert_eq!(r.masked_a, r.secret_a ^ r.measured_a ^ r.key_a);
            assert_eq!(r.combined, r.masked_a ^ r.masked_b ^ r.tp_parity);
            assert_eq!(r.decoded, r.combined ^ r.key_a ^ r.key_b);
        }
    }
}

fn secret_strategy(max_len: usize) -> impl Strategy<Value = Secret> {
    prop::collection::vec(0u8..=1, 1..=max_len).prop_map(|bits| Secret::from_bits(bits).unwrap())
}

fn decoy_label_strategy() -> impl Strategy<Value = DecoyLabel> {
    prop::sample::select(DecoyLabel::ALL.to_vec())
}

fn event_strategy() -> impl Strategy<Value = Event> {
    let channel = prop::sample::select(vec![Channel::A, Channel::B]);
    let basis = prop::sample::select(vec![Basis::Z, Basis::X]);
    let announcer = prop::sample::select(vec![Announcer::Alice, Announcer::Bob, Announcer::Tp]);
    prop_oneof![
        (channel.clone(), 0usize..200).prop_map(|(channel, position)| Event::QuantumSend {
            channel,
            position
        }),
        (
            channel.clone(),
            prop::collection::btree_set(0usize..64, 0..8),
            prop::collection::vec(basis, 8)
        )
            .prop_map(|(channel, positions, bases)| {
                let positions: Vec<usize> = positions.into_iter().collect();
                let bases = bases[..positions.len()].to_vec();
                Event::DecoyDisclosure {
                    channel,
                    positions,
                    bases,
                }
            }),
        (channel.clone(), 0usize..10, 1usize..30, any::<bool>()).prop_map(
            |(channel, errors, extra, pass)| Event::SecurityCheckResult {
                channel,
                errors,
                total: errors + extra,
                pass,
            }
        ),
        (1usize..100, announcer, 0u8..=1).prop_map(|(round, source, bit)| Event::Announce {
            round,
            source,
            bit
        }),
        prop_oneof![
            Just(Verdict::Equal),
            (1usize..100).prop_map(Verdict::NotEqualAtRound),
            channel.prop_map(Verdict::AbortedSecurityCheck),
        ]
        .prop_map(Event::Verdict),
    ]
}

proptest! {
    /// Equality of the verdict with plain bit comparison, for arbitrary
    /// secret pairs.
    #[test]
    fn verdict_matches_first_difference(
        a in secret_strategy(24),
        flips in prop::collection::vec(0u8..=1, 24),
        seed in 0u64..1000,
    ) {
        let bits_b: Vec<u8> = a
            .bits()
            .iter()
            .zip(flips.iter())
            .map(|(&bit, &flip)| bit ^ flip)
            .collect();
        let b = Secret::from_bits(bits_b).unwrap();
        let config = ProtocolConfig::default_for(a.len(), seed);
        let outcome = run_protocol(&a, &b, &config, AttackModel::None).unwrap();

        match a.bits().iter().zip(b.bits()).position(|(x, y)| x != y) {
            None => {
                prop_assert_eq!(outcome.verdict, Verdict::Equal);
                prop_assert_eq!(outcome.rounds.len(), a.len());
            }
            Some(idx) => {
                prop_assert_eq!(outcome.verdict, Verdict::NotEqualAtRound(idx + 1));
                prop_assert_eq!(outcome.rounds.len(), idx + 1);
            }
        }
    }

    /// Inserting decoys and removing them at the disclosed positions is the
    /// identity on the payload.
    #[test]
    fn decoy_insertion_round_trips(
        extra_payload in 0usize..16,
        gaps in prop::collection::vec(0usize..4, 1..12),
        labels in prop::collection::vec(decoy_label_strategy(), 12),
    ) {
        // Strictly increasing positions from arbitrary gaps, then enough
        // payload to make every position valid in the lengthened sequence.
        let mut positions = Vec::with_capacity(gaps.len());
        let mut cursor = 0usize;
        for (i, gap) in gaps.iter().enumerate() {
            cursor += gap + usize::from(i > 0);
            positions.push(cursor);
        }
        let count = positions.len();
        let payload_len = extra_payload + (positions[count - 1] + 1).saturating_sub(count);
        let entries: Vec<DecoyEntry> = positions
            .iter()
            .zip(labels.iter())
            .map(|(&position, &label)| DecoyEntry { position, label })
            .collect();
        let plan = DecoyPlan::from_entries(entries).unwrap();

        let payload: Vec<TravelAtom> = (0..payload_len)
            .map(|pair| TravelAtom::PairHalf { pair, slot: AtomSlot::A })
            .collect();
        let lengthened = insert_decoys(payload, &plan).unwrap();
        prop_assert_eq!(lengthened.len(), payload_len + plan.len());
        let recovered = remove_decoys(lengthened, &plan).unwrap();
        let indices: Vec<usize> = recovered
            .iter()
            .filter_map(|atom| match atom {
                TravelAtom::PairHalf { pair, .. } => Some(*pair),
                TravelAtom::Decoy(_) => None,
            })
            .collect();
        prop_assert_eq!(indices, (0..payload_len).collect::<Vec<_>>());
        prop_assert_eq!(recovered.len(), payload_len);
    }

    /// The transcript text format parses back to the exact event list.
    #[test]
    fn transcript_round_trips(events in prop::collection::vec(event_strategy(), 0..40)) {
        let mut transcript = Transcript::new();
        for event in events {
            transcript.push(event);
        }
        let parsed = Transcript::parse(&transcript.to_lines()).unwrap();
        prop_assert_eq!(parsed, transcript);
    }

    /// Evolution never drifts the norm, wherever the state came from.
    #[test]
    fn evolution_preserves_norm(parts in prop::collection::vec(-1.0f64..1.0, 8)) {
        let norm_sqr: f64 = parts.iter().map(|x| x * x).sum();
        prop_assume!(norm_sqr > 1e-6);
        let norm = norm_sqr.sqrt();
        let amps = [
            num_complex::Complex64::new(parts[0] / norm, parts[1] / norm),
            num_complex::Complex64::new(parts[2] / norm, parts[3] / norm),
            num_complex::Complex64::new(parts[4] / norm, parts[5] / norm),
            num_complex::Complex64::new(parts[6] / norm, parts[7] / norm),
        ];
        let state = TwoAtomState::new(amps).unwrap();
        let evolved = cavity_qpc::quantum::evolve_cavity(&state).unwrap();
        prop_assert!((evolved.norm_sqr() - 1.0).abs() <= 1e-12);
    }
}

/// 100 decoys per channel at a 5% threshold: the analytic escape
/// probability is below (3/4)^100 ≈ 3e-13, so a thousand attacked runs
/// must all abort.
#[test]
fn intercept_resend_is_always_caught_at_scale() {
    let a = Secret::from_bit_str("1").unwrap();
    for seed in 0..1000u64 {
        let config = ProtocolConfig {
            decoys_per_channel: 100,
            threshold: 0.05,
            seed,
        };
        let outcome = run_protocol(&a, &a, &config, AttackModel::InterceptResend).unwrap();
        assert!(
            matches!(outcome.verdict, Verdict::AbortedSecurityCheck(_)),
            "seed {seed} slipped through"
        );
    }
}

/// Announced user values carry no trace of the secret bits: over many runs
/// with fresh keys, P(announcement = 1) is 1/2 whichever bit was encoded.
#[test]
fn announcements_are_unbiased_in_the_secret() {
    use cavity_qpc::adversary::tp_blindness_bias;
    let mut pairs = Vec::new();
    for seed in 0..2000u64 {
        let mut rng = rng_from_seed(seed ^ 0xB1A5);
        let a = Secret::random(6, &mut rng).unwrap();
        let b = Secret::random(6, &mut rng).unwrap();
        let config = ProtocolConfig::default_for(6, 12_000 + seed);
        let outcome = run_protocol(&a, &b, &config, AttackModel::None).unwrap();
        for r in &outcome.rounds {
            pairs.push((r.masked_a, r.secret_a));
            pairs.push((r.masked_b, r.secret_b));
        }
    }
    let n = pairs.len();
    assert!(n > 4000, "enough announcement samples");
    // Each conditional frequency has ~n/2 samples; their difference has
    // variance 2·p(1−p)/(n/2).
    let sigma = (2.0 * 0.25 / (n as f64 / 2.0)).sqrt();
    let bias = tp_blindness_bias(&pairs);
    assert!(bias <= 3.0 * sigma, "bias {bias} exceeds 3σ = {:.5}", 3.0 * sigma);
}

/// A dishonest Alice attacking Bob's channel faces the same per-decoy
/// exposure as an outside attacker on that channel.
#[test]
fn dishonest_alice_is_caught_like_an_outsider() {
    let a = Secret::from_bit_str("0101").unwrap();
    let trials = 4000;
    let mut aborted_b = 0usize;
    let mut touched_a = 0usize;
    for seed in 0..trials {
        let config = ProtocolConfig {
            decoys_per_channel: 4,
            threshold: 0.0,
            seed: 11_000 + seed as u64,
        };
        let outcome = run_protocol(&a, &a, &config, AttackModel::DishonestAliceIntercept).unwrap();
        match outcome.verdict {
            Verdict::AbortedSecurityCheck(Channel::B) => aborted_b += 1,
            Verdict::AbortedSecurityCheck(Channel::A) => touched_a += 1,
            _ => {}
        }
        assert_eq!(outcome.decoy_check_a.errors, 0, "channel a is untouched");
    }
    assert_eq!(touched_a, 0);
    // Detection = 1 − (3/4)^4 ≈ 0.6836 on the attacked channel alone.
    let expected = 1.0 - 0.75_f64.powi(4);
    let rate = aborted_b as f64 / trials as f64;
    let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
    assert!(
        (rate - expected).abs() <= 3.0 * sigma,
        "detection {rate} outside 3σ of {expected}"
    );
}
