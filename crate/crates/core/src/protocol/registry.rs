//! Shared bookkeeping for evolved pairs.
//!
//! After the cavity pass the two atoms of a pair are entangled, yet they
//! travel on different channels and are measured by different parties. The
//! registry is the single source of truth for each joint state: every
//! handle measurement, legitimate or adversarial, collapses the same
//! underlying vector, so cross-atom correlations come out right.

use rand::Rng;

use crate::error::ProtocolError;
use crate::quantum::{measure_atom, AtomSlot, Basis, MeasOutcome, SingleAtomState, TwoAtomState};

/// One atom in flight on a quantum channel.
#[derive(Debug, Clone)]
pub enum TravelAtom {
    /// Half of an evolved pair, resolved through the registry.
    PairHalf { pair: usize, slot: AtomSlot },
    /// A standalone decoy atom carrying its own state.
    Decoy(SingleAtomState),
}

/// Joint states of all pairs of one run, plus per-slot consumption flags
/// for the legitimate round measurements.
#[derive(Debug, Default)]
pub struct PairRegistry {
    states: Vec<TwoAtomState>,
    round_measured: Vec<[bool; 2]>,
}

impl PairRegistry {
    pub fn new() -> Self {
        PairRegistry::default()
    }

    pub fn add_pair(&mut self, state: TwoAtomState) -> usize {
        self.states.push(state);
        self.round_measured.push([false, false]);
        self.states.len() - 1
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, pair: usize) -> &TwoAtomState {
        &self.states[pair]
    }

    /// In-channel measurement (an attacker's): collapses the joint state but
    /// does not consume the handle, because the atom is forwarded onward.
    pub fn channel_measure(
        &mut self,
        pair: usize,
        slot: AtomSlot,
        basis: Basis,
        rng: &mut impl Rng,
    ) -> Result<MeasOutcome, ProtocolError> {
        let (outcome, post) = measure_atom(&self.states[pair], slot, basis, rng)?;
        self.states[pair] = post;
        Ok(outcome)
    }

    /// A user's Z-basis round measurement; each (pair, slot) may be consumed
    /// exactly once, anything else is a protocol-order violation.
    pub fn round_measure(
        &mut self,
        pair: usize,
        slot: AtomSlot,
        rng: &mut impl Rng,
    ) -> Result<MeasOutcome, ProtocolError> {
        let flag = &mut self.round_measured[pair][slot.index()];
        if *flag {
            return Err(ProtocolError::DoubleMeasurement {
                pair,
                slot: slot.name(),
            });
        }
        *flag = true;
        let (outcome, post) = measure_atom(&self.states[pair], slot, Basis::Z, rng)?;
        self.states[pair] = post;
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{evolve_cavity, ProductLabel};
    use crate::rng::rng_from_seed;

    #[test]
    fn round_measurement_consumes_the_handle_once() {
        let mut registry = PairRegistry::new();
        let pair = registry.add_pair(
            evolve_cavity(&TwoAtomState::product(ProductLabel::GG)).unwrap(),
        );
        let mut rng = rng_from_seed(1);
        registry.round_measure(pair, AtomSlot::A, &mut rng).unwrap();
        let err = registry
            .round_measure(pair, AtomSlot::A, &mut rng)
            .unwrap_err();
        assert!(matches!(err, ProtocolError::DoubleMeasurement { .. }));
        // The partner atom is still available.
        registry.round_measure(pair, AtomSlot::B, &mut rng).unwrap();
    }

    #[test]
    fn handles_share_one_joint_state() {
        // Measuring one half fixes the other half's Z outcome.
        let mut rng = rng_from_seed(2);
        for _ in 0..50 {
            let mut registry = PairRegistry::new();
            let pair = registry.add_pair(
                evolve_cavity(&TwoAtomState::product(ProductLabel::GE)).unwrap(),
            );
            let a = registry.round_measure(pair, AtomSlot::A, &mut rng).unwrap();
            let b = registry.round_measure(pair, AtomSlot::B, &mut rng).unwrap();
            assert_eq!(a.bit() ^ b.bit(), 1);
        }
    }

    #[test]
    fn channel_measurement_does_not_consume() {
        let mut registry = PairRegistry::new();
        let pair = registry.add_pair(
            evolve_cavity(&TwoAtomState::product(ProductLabel::EE)).unwrap(),
        );
        let mut rng = rng_from_seed(3);
        registry
            .channel_measure(pair, AtomSlot::A, Basis::X, &mut rng)
            .unwrap();
        // The legitimate measurement still goes through afterwards.
        registry.round_measure(pair, AtomSlot::A, &mut rng).unwrap();
    }
}
