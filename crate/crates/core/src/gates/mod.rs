//! Gate families and the predicates that certify them.
//!
//! Two-qubit gates follow the same bit order as [`crate::tensor`]: qubit 1 is
//! the most significant bit. Embedded gates inside a three-qubit gate are
//! addressed by zero-based qubit positions `0, 1, 2`.

mod family;
mod kicked_ising;
mod perfect;
mod predicates;
mod random;
mod serial;

pub use family::{
    appendix_gate, appendix_params, cp_gate, dual_unitary_gate, embed1, embed2, triunitary_gate, Euler,
    TriUnitaryParams,
};
pub use kicked_ising::{kicked_ising_floquet, kicked_ising_half_periods, KickedIsingParams};
pub use perfect::{ame_state, perfect_tensor};
pub use predicates::{is_perfect, is_triunitary, perfect_bipartitions, TriUnitarityReport, TRI_TOL};
pub use random::{haar_state, haar_su2, haar_unitary, random_triunitary_params, seeded_rng};
pub use serial::{gate_hash, GateFile, GATE_FORMAT_VERSION};
