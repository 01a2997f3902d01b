//! Fixed-size complex state vectors, the two-atom cavity evolution
//! unitary, and Born-rule measurement with collapse.

mod evolve;
mod measure;
mod state;

pub use evolve::{cavity_unitary, evolve_cavity, Mat4};
pub use measure::{measure_atom, measure_single, AtomSlot};
pub use state::{
    Basis, DecoyLabel, MeasOutcome, ProductLabel, SingleAtomState, TwoAtomState, AMP_THRESHOLD,
    NORM_REJECT, NORM_TOLERANCE,
};
