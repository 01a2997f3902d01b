//! Born-rule measurement with collapse.
//!
//! Outcomes are sampled with a single uniform draw against cumulative
//! probabilities, with the bit-0 outcome (G or Plus) first. If one branch's
//! probability falls below the amplitude threshold, the other branch is
//! taken deterministically rather than renormalizing noise.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

use super::state::{Basis, MeasOutcome, SingleAtomState, TwoAtomState, AMP_THRESHOLD, NORM_REJECT};
use crate::error::QuantumError;

/// Which atom of a pair; `A` is the left tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomSlot {
    A,
    B,
}

impl AtomSlot {
    pub fn index(self) -> usize {
        match self {
            AtomSlot::A => 0,
            AtomSlot::B => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AtomSlot::A => "a",
            AtomSlot::B => "b",
        }
    }
}

/// Eigenvectors of a basis in the {g, e} coordinates, bit-0 outcome first.
fn eigenvectors(basis: Basis) -> [[Complex64; 2]; 2] {
    match basis {
        Basis::Z => [
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ],
        Basis::X => [
            [
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(FRAC_1_SQRT_2, 0.0),
            ],
            [
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(-FRAC_1_SQRT_2, 0.0),
            ],
        ],
    }
}

fn outcome_tag(basis: Basis, branch: usize) -> MeasOutcome {
    match (basis, branch) {
        (Basis::Z, 0) => MeasOutcome::G,
        (Basis::Z, _) => MeasOutcome::E,
        (Basis::X, 0) => MeasOutcome::Plus,
        (Basis::X, _) => MeasOutcome::Minus,
    }
}

/// Pick branch 0 or 1 from its probability with one uniform draw. A branch
/// whose weight underflows the amplitude threshold is skipped without
/// consuming a draw, so degenerate projections stay deterministic.
fn sample_branch(prob0: f64, rng: &mut impl Rng) -> usize {
    if prob0 < AMP_THRESHOLD {
        return 1;
    }
    if 1.0 - prob0 < AMP_THRESHOLD {
        return 0;
    }
    usize::from(rng.random::<f64>() >= prob0)
}

/// Amplitudes left on the unmeasured atom after projecting `which` onto the
/// basis eigenvector `eig` (not yet normalized).
fn residual(state: &TwoAtomState, which: AtomSlot, eig: &[Complex64; 2]) -> [Complex64; 2] {
    let amps = state.amps();
    // amps index = 2·(bit of A) + (bit of B)
    match which {
        AtomSlot::A => [
            eig[0].conj() * amps[0] + eig[1].conj() * amps[2],
            eig[0].conj() * amps[1] + eig[1].conj() * amps[3],
        ],
        AtomSlot::B => [
            eig[0].conj() * amps[0] + eig[1].conj() * amps[1],
            eig[0].conj() * amps[2] + eig[1].conj() * amps[3],
        ],
    }
}

/// Measure one atom of a pair, collapsing the joint state.
///
/// Returns the sampled outcome and the renormalized post-measurement state;
/// the other atom's later statistics follow from the collapsed joint vector.
pub fn measure_atom(
    state: &TwoAtomState,
    which: AtomSlot,
    basis: Basis,
    rng: &mut impl Rng,
) -> Result<(MeasOutcome, TwoAtomState), QuantumError> {
    let deviation = state.norm_deviation();
    if deviation > NORM_REJECT {
        return Err(QuantumError::NotNormalized { deviation });
    }

    let eigs = eigenvectors(basis);
    let res0 = residual(state, which, &eigs[0]);
    let prob0 = res0[0].norm_sqr() + res0[1].norm_sqr();

    let branch = sample_branch(prob0, rng);
    let res = if branch == 0 {
        res0
    } else {
        residual(state, which, &eigs[1])
    };
    let prob = res[0].norm_sqr() + res[1].norm_sqr();
    let inv_norm = 1.0 / prob.sqrt();

    let eig = &eigs[branch];
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for (k, amp) in amps.iter_mut().enumerate() {
        let (a_bit, b_bit) = (k >> 1, k & 1);
        *amp = match which {
            AtomSlot::A => eig[a_bit] * res[b_bit] * inv_norm,
            AtomSlot::B => eig[b_bit] * res[a_bit] * inv_norm,
        };
    }

    Ok((outcome_tag(basis, branch), TwoAtomState::new_unchecked(amps)))
}

/// Measure a lone atom in the given basis.
///
/// The post-measurement state is the outcome's eigenstate and carries no
/// extra information, so only the outcome is returned.
pub fn measure_single(
    state: &SingleAtomState,
    basis: Basis,
    rng: &mut impl Rng,
) -> Result<MeasOutcome, QuantumError> {
    let deviation = (state.norm_sqr() - 1.0).abs();
    if deviation > NORM_REJECT {
        return Err(QuantumError::NotNormalized { deviation });
    }

    let eigs = eigenvectors(basis);
    let overlap0 = eigs[0][0].conj() * state.amp_g + eigs[0][1].conj() * state.amp_e;
    let branch = sample_branch(overlap0.norm_sqr(), rng);
    Ok(outcome_tag(basis, branch))
}
