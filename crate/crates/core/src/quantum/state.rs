//! Single- and two-atom state vectors over the {g, e} levels.
//!
//! Two-atom amplitudes are stored in the fixed order (gg, ge, eg, ee); atom
//! A is always the left tensor factor. All states are unit vectors; the
//! constructors enforce finiteness and normalization.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::QuantumError;

/// Tolerance for normalization and unitarity assertions.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Rejection threshold for externally supplied states; anything this far
/// from unit norm signals corrupted construction, not round-off.
pub const NORM_REJECT: f64 = 1e-9;
/// Amplitudes below this magnitude are treated as exact zeros when scanning
/// superposition branches.
pub const AMP_THRESHOLD: f64 = 1e-12;

/// Measurement basis for one atom: Z is {|g⟩, |e⟩}, X is {|+⟩, |−⟩}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    X,
}

/// The four computational-basis product states the trusted party prepares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductLabel {
    GG,
    GE,
    EG,
    EE,
}

impl ProductLabel {
    pub const ALL: [ProductLabel; 4] = [
        ProductLabel::GG,
        ProductLabel::GE,
        ProductLabel::EG,
        ProductLabel::EE,
    ];

    /// Index into the (gg, ge, eg, ee) amplitude order.
    pub fn index(self) -> usize {
        match self {
            ProductLabel::GG => 0,
            ProductLabel::GE => 1,
            ProductLabel::EG => 2,
            ProductLabel::EE => 3,
        }
    }

    pub fn from_index(index: usize) -> Option<ProductLabel> {
        ProductLabel::ALL.get(index).copied()
    }

    /// Number of excited atoms mod 2 (the Z-parity of the basis state).
    pub fn z_parity(self) -> u8 {
        match self {
            ProductLabel::GG | ProductLabel::EE => 0,
            ProductLabel::GE | ProductLabel::EG => 1,
        }
    }
}

/// Outcome of a single-atom measurement. `G`/`E` belong to the Z basis,
/// `Plus`/`Minus` to the X basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasOutcome {
    G,
    E,
    Plus,
    Minus,
}

impl MeasOutcome {
    /// Classical bit code: |g⟩ and |+⟩ code 0, |e⟩ and |−⟩ code 1.
    pub fn bit(self) -> u8 {
        match self {
            MeasOutcome::G | MeasOutcome::Plus => 0,
            MeasOutcome::E | MeasOutcome::Minus => 1,
        }
    }

    /// Whether this outcome tag belongs to the given basis.
    pub fn in_basis(self, basis: Basis) -> bool {
        match basis {
            Basis::Z => matches!(self, MeasOutcome::G | MeasOutcome::E),
            Basis::X => matches!(self, MeasOutcome::Plus | MeasOutcome::Minus),
        }
    }
}

/// The four single-atom decoy preparations used for the channel check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoyLabel {
    G,
    E,
    Plus,
    Minus,
}

impl DecoyLabel {
    pub const ALL: [DecoyLabel; 4] = [
        DecoyLabel::G,
        DecoyLabel::E,
        DecoyLabel::Plus,
        DecoyLabel::Minus,
    ];

    /// Prepare the decoy state: |g⟩, |e⟩, or (1/√2)(|g⟩ ± |e⟩).
    pub fn state(self) -> SingleAtomState {
        match self {
            DecoyLabel::G => SingleAtomState::ground(),
            DecoyLabel::E => SingleAtomState::excited(),
            DecoyLabel::Plus => SingleAtomState::plus(),
            DecoyLabel::Minus => SingleAtomState::minus(),
        }
    }

    /// Basis in which the decoy is an eigenstate.
    pub fn basis(self) -> Basis {
        match self {
            DecoyLabel::G | DecoyLabel::E => Basis::Z,
            DecoyLabel::Plus | DecoyLabel::Minus => Basis::X,
        }
    }

    /// The outcome a matching-basis measurement must return.
    pub fn expected_outcome(self) -> MeasOutcome {
        match self {
            DecoyLabel::G => MeasOutcome::G,
            DecoyLabel::E => MeasOutcome::E,
            DecoyLabel::Plus => MeasOutcome::Plus,
            DecoyLabel::Minus => MeasOutcome::Minus,
        }
    }

    /// The eigenstate a measurement outcome collapses to.
    pub fn from_outcome(outcome: MeasOutcome) -> DecoyLabel {
        match outcome {
            MeasOutcome::G => DecoyLabel::G,
            MeasOutcome::E => DecoyLabel::E,
            MeasOutcome::Plus => DecoyLabel::Plus,
            MeasOutcome::Minus => DecoyLabel::Minus,
        }
    }
}

fn all_finite(amps: &[Complex64]) -> bool {
    amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
}

/// Relative phase that best aligns `b` onto `a`, if the overlap is nonzero.
fn alignment_phase(overlap: Complex64) -> Option<Complex64> {
    let norm = overlap.norm();
    if norm < AMP_THRESHOLD {
        None
    } else {
        Some(overlap / norm)
    }
}

/// Normalized state of one two-level atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleAtomState {
    pub amp_g: Complex64,
    pub amp_e: Complex64,
}

impl SingleAtomState {
    pub fn new(amp_g: Complex64, amp_e: Complex64) -> Result<Self, QuantumError> {
        let state = SingleAtomState { amp_g, amp_e };
        if !all_finite(&[amp_g, amp_e]) {
            return Err(QuantumError::NonFiniteAmplitude);
        }
        let deviation = (state.norm_sqr() - 1.0).abs();
        if deviation > NORM_REJECT {
            return Err(QuantumError::NotNormalized { deviation });
        }
        Ok(state)
    }

    pub fn ground() -> Self {
        SingleAtomState {
            amp_g: Complex64::new(1.0, 0.0),
            amp_e: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        SingleAtomState {
            amp_g: Complex64::new(0.0, 0.0),
            amp_e: Complex64::new(1.0, 0.0),
        }
    }

    pub fn plus() -> Self {
        SingleAtomState {
            amp_g: Complex64::new(FRAC_1_SQRT_2, 0.0),
            amp_e: Complex64::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn minus() -> Self {
        SingleAtomState {
            amp_g: Complex64::new(FRAC_1_SQRT_2, 0.0),
            amp_e: Complex64::new(-FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp_g.norm_sqr() + self.amp_e.norm_sqr()
    }

    /// Equality up to a global phase, within `tol` per amplitude.
    pub fn approx_eq_up_to_phase(&self, other: &SingleAtomState, tol: f64) -> bool {
        let overlap = other.amp_g.conj() * self.amp_g + other.amp_e.conj() * self.amp_e;
        match alignment_phase(overlap) {
            Some(phase) => {
                (self.amp_g - phase * other.amp_g).norm() <= tol
                    && (self.amp_e - phase * other.amp_e).norm() <= tol
            }
            None => false,
        }
    }
}

/// Normalized joint state of two atoms; amplitudes ordered (gg, ge, eg, ee).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAtomState {
    amps: [Complex64; 4],
}

impl TwoAtomState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self, QuantumError> {
        if !all_finite(&amps) {
            return Err(QuantumError::NonFiniteAmplitude);
        }
        let state = TwoAtomState { amps };
        let deviation = (state.norm_sqr() - 1.0).abs();
        if deviation > NORM_REJECT {
            return Err(QuantumError::NotNormalized { deviation });
        }
        Ok(state)
    }

    /// Construct without the normalization guard. Callers must hand in a
    /// unit vector (e.g. the output of a unitary or a renormalized
    /// projection).
    pub(crate) fn new_unchecked(amps: [Complex64; 4]) -> Self {
        TwoAtomState { amps }
    }

    /// The computational-basis product state for a label.
    pub fn product(label: ProductLabel) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[label.index()] = Complex64::new(1.0, 0.0);
        TwoAtomState { amps }
    }

    pub fn amps(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm_deviation(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    /// Indices of basis components carrying weight above [`AMP_THRESHOLD`].
    pub fn branch_indices(&self) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > AMP_THRESHOLD)
            .map(|(k, _)| k)
            .collect()
    }

    /// Equality up to a global phase, within `tol` per amplitude.
    pub fn approx_eq_up_to_phase(&self, other: &TwoAtomState, tol: f64) -> bool {
        let overlap: Complex64 = other
            .amps
            .iter()
            .zip(self.amps.iter())
            .map(|(b, a)| b.conj() * a)
            .sum();
        match alignment_phase(overlap) {
            Some(phase) => self
                .amps
                .iter()
                .zip(other.amps.iter())
                .all(|(a, b)| (a - phase * b).norm() <= tol),
            None => false,
        }
    }
}
