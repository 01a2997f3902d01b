//! The two-atom cavity evolution map.
//!
//! One pass through the driven cavity sends each computational-basis state
//! to an equal-weight superposition of itself and its double-flip partner:
//!
//! ```text
//! |gg⟩ → s(|gg⟩ − i|ee⟩)    |ge⟩ → s(|ge⟩ − i|eg⟩)
//! |eg⟩ → s(|eg⟩ − i|ge⟩)    |ee⟩ → s(|ee⟩ − i|gg⟩)
//! ```
//!
//! with the scalar s = (√2/2)·e^{−iπ/4} = (1 − i)/2 kept literally. The map
//! flips both atoms or neither, so the number of excited atoms mod 2 is
//! conserved, which is the fact the comparison protocol rides on.

use num_complex::Complex64;

use super::state::{TwoAtomState, NORM_REJECT};
use crate::error::QuantumError;

/// Dense 4×4 complex matrix over the (gg, ge, eg, ee) basis, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat4(pub [[Complex64; 4]; 4]);

impl Mat4 {
    pub fn identity() -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = Complex64::new(1.0, 0.0);
        }
        Mat4(m)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat4 {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.0[c][r].conj();
            }
        }
        Mat4(m)
    }

    pub fn mul(&self, other: &Mat4) -> Mat4 {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|k| self.0[r][k] * other.0[k][c]).sum();
            }
        }
        Mat4(m)
    }

    pub fn mul_vec(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (r, entry) in out.iter_mut().enumerate() {
            *entry = (0..4).map(|k| self.0[r][k] * v[k]).sum();
        }
        out
    }

    /// Largest entry magnitude of `self − other`.
    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        let mut max = 0.0_f64;
        for r in 0..4 {
            for c in 0..4 {
                max = max.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        max
    }

    pub fn column(&self, c: usize) -> [Complex64; 4] {
        [self.0[0][c], self.0[1][c], self.0[2][c], self.0[3][c]]
    }
}

/// (√2/2)·e^{−iπ/4}, expanded exactly to (1 − i)/2.
const SCALE: Complex64 = Complex64::new(0.5, -0.5);
/// −i · SCALE.
const NEG_I_SCALE: Complex64 = Complex64::new(-0.5, -0.5);

/// The unitary realized by one cavity pass; columns ordered (gg, ge, eg, ee).
pub fn cavity_unitary() -> Mat4 {
    let zero = Complex64::new(0.0, 0.0);
    Mat4([
        [SCALE, zero, zero, NEG_I_SCALE],
        [zero, SCALE, NEG_I_SCALE, zero],
        [zero, NEG_I_SCALE, SCALE, zero],
        [NEG_I_SCALE, zero, zero, SCALE],
    ])
}

/// Apply the cavity map to a normalized pair state.
///
/// Rejects inputs whose norm deviates by more than [`NORM_REJECT`]; such a
/// state can only come from corrupted construction.
pub fn evolve_cavity(state: &TwoAtomState) -> Result<TwoAtomState, QuantumError> {
    let deviation = state.norm_deviation();
    if deviation > NORM_REJECT {
        return Err(QuantumError::NotNormalized { deviation });
    }
    let out = cavity_unitary().mul_vec(state.amps());
    Ok(TwoAtomState::new_unchecked(out))
}
