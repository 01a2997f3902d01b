//! Decoy insertion and the channel security check.
//!
//! TP splices sample single atoms into each travel sequence at secret
//! positions. After the receiver confirms the transmission, positions and
//! bases are disclosed, the receiver measures each decoy in its preparation
//! basis, and TP compares the reported outcomes against the preparations.
//! Any channel tampering that touches a decoy in the wrong basis shows up
//! as a mismatch.

use rand::seq::index::sample;
use rand::Rng;

use super::registry::TravelAtom;
use crate::error::ProtocolError;
use crate::quantum::{measure_single, DecoyLabel};

/// One planned decoy: where it sits in the lengthened sequence and what was
/// prepared there. The measurement basis is the label's eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoyEntry {
    pub position: usize,
    pub label: DecoyLabel,
}

/// A single channel's decoy plan; positions strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoyPlan {
    entries: Vec<DecoyEntry>,
}

impl DecoyPlan {
    pub fn from_entries(entries: Vec<DecoyEntry>) -> Result<Self, ProtocolError> {
        if !entries.windows(2).all(|w| w[0].position < w[1].position) {
            return Err(ProtocolError::InvalidDecoyPlan {
                reason: "positions must be strictly increasing".into(),
            });
        }
        Ok(DecoyPlan { entries })
    }

    /// Draw `count` insertion positions uniformly without replacement from
    /// the lengthened sequence and a uniform label for each.
    pub fn random(payload_len: usize, count: usize, rng: &mut impl Rng) -> Self {
        let total = payload_len + count;
        let mut positions = sample(rng, total, count).into_vec();
        positions.sort_unstable();
        let entries = positions
            .into_iter()
            .map(|position| DecoyEntry {
                position,
                label: DecoyLabel::ALL[rng.random_range(0..4)],
            })
            .collect();
        DecoyPlan { entries }
    }

    pub fn entries(&self) -> &[DecoyEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positions(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.position).collect()
    }
}

/// Splice the planned decoys into a travel sequence. Decoys end up at
/// exactly the planned positions of the lengthened list; payload order is
/// preserved.
pub fn insert_decoys(
    travel: Vec<TravelAtom>,
    plan: &DecoyPlan,
) -> Result<Vec<TravelAtom>, ProtocolError> {
    let total = travel.len() + plan.len();
    if plan.entries.iter().any(|e| e.position >= total) {
        return Err(ProtocolError::InvalidDecoyPlan {
            reason: format!("position out of range for lengthened length {total}"),
        });
    }

    let mut out = Vec::with_capacity(total);
    let mut payload = travel.into_iter();
    let mut entries = plan.entries.iter().peekable();
    for position in 0..total {
        match entries.peek() {
            Some(entry) if entry.position == position => {
                out.push(TravelAtom::Decoy(entry.label.state()));
                entries.next();
            }
            _ => out.push(payload.next().expect("payload exhausted before positions")),
        }
    }
    Ok(out)
}

/// Drop the decoys back out, restoring the payload sequence.
pub fn remove_decoys(
    lengthened: Vec<TravelAtom>,
    plan: &DecoyPlan,
) -> Result<Vec<TravelAtom>, ProtocolError> {
    if plan.entries.iter().any(|e| e.position >= lengthened.len()) {
        return Err(ProtocolError::InvalidDecoyPlan {
            reason: "position out of range for received sequence".into(),
        });
    }
    let mut entries = plan.entries.iter().peekable();
    let mut payload = Vec::with_capacity(lengthened.len() - plan.len());
    for (position, atom) in lengthened.into_iter().enumerate() {
        match entries.peek() {
            Some(entry) if entry.position == position => {
                entries.next();
            }
            _ => payload.push(atom),
        }
    }
    Ok(payload)
}

/// What the channel check produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityCheckOutcome {
    pub errors: usize,
    pub total: usize,
    pub pass: bool,
}

impl SecurityCheckOutcome {
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.total as f64
    }
}

/// Measure each planned decoy of the received sequence in its preparation
/// basis and compare with the preparation. Passes iff the mismatch rate is
/// at most `threshold`.
pub fn security_check(
    received: &[TravelAtom],
    plan: &DecoyPlan,
    threshold: f64,
    rng: &mut impl Rng,
) -> Result<SecurityCheckOutcome, ProtocolError> {
    if plan.is_empty() {
        return Err(ProtocolError::EmptyDecoySet);
    }
    let mut errors = 0usize;
    for entry in &plan.entries {
        let atom = received
            .get(entry.position)
            .ok_or_else(|| ProtocolError::InvalidDecoyPlan {
                reason: "position out of range for received sequence".into(),
            })?;
        let state = match atom {
            TravelAtom::Decoy(state) => state,
            TravelAtom::PairHalf { .. } => {
                return Err(ProtocolError::InvalidDecoyPlan {
                    reason: format!("payload atom at planned decoy position {}", entry.position),
                })
            }
        };
        let outcome = measure_single(state, entry.label.basis(), rng)?;
        if outcome != entry.label.expected_outcome() {
            errors += 1;
        }
    }
    let total = plan.len();
    let error_rate = errors as f64 / total as f64;
    Ok(SecurityCheckOutcome {
        errors,
        total,
        pass: error_rate <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{AtomSlot, SingleAtomState};
    use crate::rng::rng_from_seed;

    fn payload(n: usize) -> Vec<TravelAtom> {
        (0..n)
            .map(|pair| TravelAtom::PairHalf {
                pair,
                slot: AtomSlot::A,
            })
            .collect()
    }

    fn plan(entries: &[(usize, DecoyLabel)]) -> DecoyPlan {
        DecoyPlan::from_entries(
            entries
                .iter()
                .map(|&(position, label)| DecoyEntry { position, label })
                .collect(),
        )
        .unwrap()
    }

    fn payload_indices(atoms: &[TravelAtom]) -> Vec<usize> {
        atoms
            .iter()
            .filter_map(|a| match a {
                TravelAtom::PairHalf { pair, .. } => Some(*pair),
                TravelAtom::Decoy(_) => None,
            })
            .collect()
    }

    #[test]
    fn splices_at_exact_positions() {
        // [p1, p2] with decoys at {0, 3} → [d, p1, p2, d].
        let plan = plan(&[(0, DecoyLabel::G), (3, DecoyLabel::Plus)]);
        let out = insert_decoys(payload(2), &plan).unwrap();
        assert_eq!(out.len(), 4);
        assert!(matches!(out[0], TravelAtom::Decoy(_)));
        assert!(matches!(out[1], TravelAtom::PairHalf { pair: 0, .. }));
        assert!(matches!(out[2], TravelAtom::PairHalf { pair: 1, .. }));
        assert!(matches!(out[3], TravelAtom::Decoy(_)));
    }

    #[test]
    fn empty_plan_is_identity() {
        let plan = plan(&[]);
        let out = insert_decoys(payload(3), &plan).unwrap();
        assert_eq!(payload_indices(&out), vec![0, 1, 2]);
    }

    #[test]
    fn insert_then_remove_round_trips() {
        let mut rng = rng_from_seed(10);
        for _ in 0..50 {
            let n = rng.random_range(1..20);
            let d = rng.random_range(1..10);
            let plan = DecoyPlan::random(n, d, &mut rng);
            let lengthened = insert_decoys(payload(n), &plan).unwrap();
            assert_eq!(lengthened.len(), n + d);
            let recovered = remove_decoys(lengthened, &plan).unwrap();
            assert_eq!(payload_indices(&recovered), (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn rejects_bad_plans() {
        assert!(DecoyPlan::from_entries(vec![
            DecoyEntry {
                position: 2,
                label: DecoyLabel::G
            },
            DecoyEntry {
                position: 2,
                label: DecoyLabel::E
            },
        ])
        .is_err());

        let out_of_range = plan(&[(5, DecoyLabel::G)]);
        assert!(matches!(
            insert_decoys(payload(2), &out_of_range),
            Err(ProtocolError::InvalidDecoyPlan { .. })
        ));
    }

    #[test]
    fn clean_channel_checks_error_free() {
        let mut rng = rng_from_seed(6);
        for _ in 0..100 {
            let plan = DecoyPlan::random(4, 6, &mut rng);
            let lengthened = insert_decoys(payload(4), &plan).unwrap();
            let outcome = security_check(&lengthened, &plan, 0.0, &mut rng).unwrap();
            assert_eq!(outcome.errors, 0);
            assert!(outcome.pass);
            assert_eq!(outcome.error_rate(), 0.0);
        }
    }

    #[test]
    fn one_flipped_decoy_fails_zero_threshold() {
        let plan = plan(&[(0, DecoyLabel::G), (1, DecoyLabel::E)]);
        let mut lengthened = insert_decoys(Vec::new(), &plan).unwrap();
        // Corrupt the first decoy: |g⟩ → |e⟩.
        lengthened[0] = TravelAtom::Decoy(SingleAtomState::excited());
        let mut rng = rng_from_seed(7);
        let outcome = security_check(&lengthened, &plan, 0.0, &mut rng).unwrap();
        assert_eq!(outcome.errors, 1);
        assert_eq!(outcome.total, 2);
        assert!(!outcome.pass);
    }

    #[test]
    fn empty_decoy_set_is_a_configuration_error() {
        let plan = plan(&[]);
        let mut rng = rng_from_seed(8);
        assert_eq!(
            security_check(&payload(2), &plan, 0.0, &mut rng).unwrap_err(),
            ProtocolError::EmptyDecoySet
        );
    }
}
