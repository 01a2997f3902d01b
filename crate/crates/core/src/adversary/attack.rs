//! Attacks on the quantum channels.
//!
//! An attacker sees the lengthened sequences in flight but cannot tell
//! decoys from payload, since positions and bases are disclosed only after
//! receipt. Measuring an atom and forwarding the collapsed eigenstate is
//! therefore blind: a decoy met in the wrong basis flips under the
//! receiver's check measurement with probability 1/2.

use rand::Rng;

use crate::error::ProtocolError;
use crate::protocol::{Channel, PairRegistry, TravelAtom};
use crate::quantum::{measure_single, Basis, DecoyLabel, MeasOutcome};

/// Channel attack strategy for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackModel {
    /// Leave the channels untouched.
    None,
    /// Measure every atom on both channels in a fresh uniformly random
    /// basis and forward the collapsed state.
    InterceptResend,
    /// Measure every atom on both channels in one fixed basis.
    MeasureResend(Basis),
    /// Alice attacks the channel to Bob, acting exactly like an outside
    /// intercept-resend eavesdropper on that channel.
    DishonestAliceIntercept,
}

impl AttackModel {
    fn touches(self, channel: Channel) -> bool {
        match self {
            AttackModel::None => false,
            AttackModel::InterceptResend | AttackModel::MeasureResend(_) => true,
            AttackModel::DishonestAliceIntercept => channel == Channel::B,
        }
    }
}

/// The attacker's private note for one intercepted atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EveObservation {
    pub position: usize,
    pub basis: Basis,
    pub outcome: MeasOutcome,
    /// The eigenstate forwarded in place of the original atom.
    pub resent: DecoyLabel,
}

/// All observations made on one channel. Private to the adversary; never
/// part of the transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EveRecord {
    pub channel: Channel,
    pub observations: Vec<EveObservation>,
}

impl EveRecord {
    /// Debug dump in the same line-delimited style as the transcript, each
    /// line tagged `eve` so the two can never be confused.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for obs in &self.observations {
            let basis = match obs.basis {
                Basis::Z => "z",
                Basis::X => "x",
            };
            out.push_str(&format!(
                "eve\tchannel={}\tposition={}\tbasis={}\toutcome={:?}\tresent={:?}\n",
                self.channel.name(),
                obs.position,
                basis,
                obs.outcome,
                obs.resent,
            ));
        }
        out
    }
}

fn measure_and_resend(
    atoms: &mut [TravelAtom],
    registry: &mut PairRegistry,
    channel: Channel,
    mut pick_basis: impl FnMut(&mut dyn FnMut() -> bool) -> Basis,
    rng: &mut impl Rng,
) -> Result<EveRecord, ProtocolError> {
    let mut observations = Vec::with_capacity(atoms.len());
    for (position, atom) in atoms.iter_mut().enumerate() {
        let basis = pick_basis(&mut || rng.random_bool(0.5));
        let outcome = match atom {
            TravelAtom::Decoy(state) => {
                let outcome = measure_single(state, basis, rng)?;
                *state = DecoyLabel::from_outcome(outcome).state();
                outcome
            }
            TravelAtom::PairHalf { pair, slot } => {
                // Collapsing via the registry keeps the partner atom's
                // statistics consistent; the measured half is forwarded in
                // the outcome's eigenstate.
                registry.channel_measure(*pair, *slot, basis, rng)?
            }
        };
        observations.push(EveObservation {
            position,
            basis,
            outcome,
            resent: DecoyLabel::from_outcome(outcome),
        });
    }
    Ok(EveRecord {
        channel,
        observations,
    })
}

/// Intercept-resend: a fresh uniformly random basis per atom.
pub fn intercept_resend(
    atoms: &mut [TravelAtom],
    registry: &mut PairRegistry,
    channel: Channel,
    rng: &mut impl Rng,
) -> Result<EveRecord, ProtocolError> {
    measure_and_resend(
        atoms,
        registry,
        channel,
        |coin| if coin() { Basis::Z } else { Basis::X },
        rng,
    )
}

/// Measure-resend: one fixed basis for every atom.
pub fn measure_resend(
    atoms: &mut [TravelAtom],
    registry: &mut PairRegistry,
    channel: Channel,
    basis: Basis,
    rng: &mut impl Rng,
) -> Result<EveRecord, ProtocolError> {
    measure_and_resend(atoms, registry, channel, |_| basis, rng)
}

/// Apply the configured attack to one channel's in-flight sequence.
/// Returns the attacker's record when the channel was touched.
pub fn apply_attack(
    model: AttackModel,
    channel: Channel,
    atoms: &mut [TravelAtom],
    registry: &mut PairRegistry,
    rng: &mut impl Rng,
) -> Result<Option<EveRecord>, ProtocolError> {
    if !model.touches(channel) {
        return Ok(None);
    }
    let record = match model {
        AttackModel::None => unreachable!("None never touches a channel"),
        AttackModel::InterceptResend | AttackModel::DishonestAliceIntercept => {
            intercept_resend(atoms, registry, channel, rng)?
        }
        AttackModel::MeasureResend(basis) => {
            measure_resend(atoms, registry, channel, basis, rng)?
        }
    };
    Ok(Some(record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{insert_decoys, security_check, DecoyEntry, DecoyPlan};
    use crate::quantum::SingleAtomState;
    use crate::rng::{derive_trial_seed, rng_from_seed};

    /// Independent oracle for the intercept-resend detection rate: average
    /// over the four decoy preparations and the attacker's two bases, using
    /// nothing but squared overlaps of 2-vectors computed right here.
    fn detection_rate_oracle() -> f64 {
        let overlap_sqr = |a: &SingleAtomState, b: &SingleAtomState| -> f64 {
            (a.amp_g.conj() * b.amp_g + a.amp_e.conj() * b.amp_e).norm_sqr()
        };
        let eigenstates = |basis: Basis| -> [SingleAtomState; 2] {
            match basis {
                Basis::Z => [DecoyLabel::G.state(), DecoyLabel::E.state()],
                Basis::X => [DecoyLabel::Plus.state(), DecoyLabel::Minus.state()],
            }
        };

        let mut total = 0.0;
        for label in DecoyLabel::ALL {
            let prepared = label.state();
            for eve_basis in [Basis::Z, Basis::X] {
                // Eve's outcome distribution, then the receiver re-measures
                // in the preparation basis; a mismatch is an error.
                let mut error = 0.0;
                for forwarded in eigenstates(eve_basis) {
                    let p_eve = overlap_sqr(&forwarded, &prepared);
                    let p_keep = overlap_sqr(&prepared, &forwarded);
                    error += p_eve * (1.0 - p_keep);
                }
                total += error / (DecoyLabel::ALL.len() as f64 * 2.0);
            }
        }
        total
    }

    fn decoy_only_channel(labels: &[DecoyLabel]) -> (Vec<TravelAtom>, DecoyPlan) {
        let plan = DecoyPlan::from_entries(
            labels
                .iter()
                .enumerate()
                .map(|(position, &label)| DecoyEntry { position, label })
                .collect(),
        )
        .unwrap();
        let atoms = insert_decoys(Vec::new(), &plan).unwrap();
        (atoms, plan)
    }

    fn uniform_labels(count: usize, rng: &mut impl Rng) -> Vec<DecoyLabel> {
        (0..count)
            .map(|_| DecoyLabel::ALL[rng.random_range(0..4)])
            .collect()
    }

    #[test]
    fn oracle_pins_the_quarter_rate() {
        assert!((detection_rate_oracle() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn matching_basis_leaves_decoys_intact() {
        // Z eigenstates measured in Z are forwarded unchanged, so a check
        // restricted to |g⟩/|e⟩ decoys never detects a fixed-Z attacker.
        // This degenerate case is what motivates the X-basis decoys.
        let labels: Vec<DecoyLabel> = (0..32)
            .map(|i| if i % 2 == 0 { DecoyLabel::G } else { DecoyLabel::E })
            .collect();
        let (mut atoms, plan) = decoy_only_channel(&labels);
        let mut registry = PairRegistry::new();
        let mut rng = rng_from_seed(21);
        let record =
            measure_resend(&mut atoms, &mut registry, Channel::A, Basis::Z, &mut rng).unwrap();
        for (obs, label) in record.observations.iter().zip(labels.iter()) {
            assert_eq!(obs.resent, *label);
        }
        let outcome = security_check(&atoms, &plan, 0.0, &mut rng).unwrap();
        assert_eq!(outcome.errors, 0);
    }

    #[test]
    fn wrong_basis_randomizes_the_check_measurement() {
        // |g⟩ decoys measured in X come back as |±⟩; the Z check then errs
        // with probability 1/2.
        let n = 40_000;
        let (mut atoms, plan) = decoy_only_channel(&vec![DecoyLabel::G; n]);
        let mut registry = PairRegistry::new();
        let mut rng = rng_from_seed(22);
        measure_resend(&mut atoms, &mut registry, Channel::A, Basis::X, &mut rng).unwrap();
        let outcome = security_check(&atoms, &plan, 1.0, &mut rng).unwrap();
        let rate = outcome.error_rate();
        let sigma = (0.25 / n as f64).sqrt();
        assert!((rate - 0.5).abs() <= 3.0 * sigma, "rate {rate} not ~0.5");
    }

    #[test]
    fn intercept_resend_errors_are_bernoulli_quarter() {
        let expected = detection_rate_oracle();
        let n = 20_000;
        let mut rng = rng_from_seed(23);
        let labels = uniform_labels(n, &mut rng);
        let (mut atoms, plan) = decoy_only_channel(&labels);
        let mut registry = PairRegistry::new();
        intercept_resend(&mut atoms, &mut registry, Channel::B, &mut rng).unwrap();
        let outcome = security_check(&atoms, &plan, 1.0, &mut rng).unwrap();
        let rate = outcome.error_rate();
        let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!(
            (rate - expected).abs() <= 3.0 * sigma,
            "rate {rate} outside 3σ of {expected}"
        );
    }

    #[test]
    fn fixed_basis_over_uniform_labels_also_hits_one_quarter() {
        // Only the two opposite-basis preparations (probability 1/2) flip,
        // each with probability 1/2.
        for (seed, basis) in [(31u64, Basis::Z), (32, Basis::X)] {
            let n = 20_000;
            let mut rng = rng_from_seed(seed);
            let labels = uniform_labels(n, &mut rng);
            let (mut atoms, plan) = decoy_only_channel(&labels);
            let mut registry = PairRegistry::new();
            measure_resend(&mut atoms, &mut registry, Channel::A, basis, &mut rng).unwrap();
            let outcome = security_check(&atoms, &plan, 1.0, &mut rng).unwrap();
            let rate = outcome.error_rate();
            let sigma = (0.25 * 0.75 / n as f64).sqrt();
            assert!(
                (rate - 0.25).abs() <= 3.0 * sigma,
                "{basis:?}: rate {rate} outside 3σ of 0.25"
            );
        }
    }

    #[test]
    fn check_pass_rate_compounds_per_decoy() {
        // P(pass) = (3/4)^d for d decoys under intercept-resend.
        for &d in &[1usize, 5, 10] {
            let trials = 10_000;
            let mut passes = 0usize;
            for t in 0..trials {
                let mut rng = rng_from_seed(derive_trial_seed(4242, (d * trials + t) as u64));
                let labels = uniform_labels(d, &mut rng);
                let (mut atoms, plan) = decoy_only_channel(&labels);
                let mut registry = PairRegistry::new();
                intercept_resend(&mut atoms, &mut registry, Channel::A, &mut rng).unwrap();
                if security_check(&atoms, &plan, 0.0, &mut rng).unwrap().pass {
                    passes += 1;
                }
            }
            let expected = 0.75_f64.powi(d as i32);
            let rate = passes as f64 / trials as f64;
            let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
            assert!(
                (rate - expected).abs() <= 3.0 * sigma,
                "d={d}: pass rate {rate} outside 3σ of {expected}"
            );
        }
    }

    #[test]
    fn none_model_touches_nothing() {
        let (mut atoms, plan) = decoy_only_channel(&[DecoyLabel::Plus, DecoyLabel::Minus]);
        let mut registry = PairRegistry::new();
        let mut rng = rng_from_seed(9);
        let record =
            apply_attack(AttackModel::None, Channel::A, &mut atoms, &mut registry, &mut rng)
                .unwrap();
        assert!(record.is_none());
        let outcome = security_check(&atoms, &plan, 0.0, &mut rng).unwrap();
        assert_eq!(outcome.errors, 0);
    }

    #[test]
    fn dishonest_alice_only_touches_channel_b() {
        assert!(!AttackModel::DishonestAliceIntercept.touches(Channel::A));
        assert!(AttackModel::DishonestAliceIntercept.touches(Channel::B));
        assert!(AttackModel::InterceptResend.touches(Channel::A));
    }

    #[test]
    fn eve_record_lines_are_marked() {
        let record = EveRecord {
            channel: Channel::B,
            observations: vec![EveObservation {
                position: 2,
                basis: Basis::X,
                outcome: MeasOutcome::Minus,
                resent: DecoyLabel::Minus,
            }],
        };
        let lines = record.to_lines();
        assert!(lines.starts_with("eve\t"));
        assert!(lines.contains("channel=b"));
        assert!(lines.contains("position=2"));
    }
}
