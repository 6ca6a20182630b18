//! Complex dense tensor primitives shared by every other module.
//!
//! # Leg convention
//!
//! A three-qubit gate is a rank-6 tensor `U^{a4 a5 a6}_{a1 a2 a3}`. Inputs
//! `(a1, a2, a3)` are the lower legs of the hexagon, qubits 1, 2, 3 from left
//! to right. Outputs `(a4, a5, a6)` are the upper legs, with `a4` above `a1`,
//! `a5` above `a2` and `a6` above `a3`. Going counterclockwise around the
//! hexagon the legs read `1, 2, 3, 6, 5, 4`, so the three arrows of time
//! `(1,2,3) -> (4,5,6)`, `(4,1,2) -> (5,6,3)` and `(5,4,1) -> (6,3,2)` all
//! pick contiguous triplets.
//!
//! As an 8x8 matrix the gate is `M[out, in]` with `in = 4 a1 + 2 a2 + a3` and
//! `out = 4 a4 + 2 a5 + a6` (qubit 1 is the most significant bit on both
//! sides). Registers follow the same rule: site 0 is the most significant bit
//! of a basis index.

mod kernel;
mod legs;
mod operator;
mod qubit;
mod state;

pub use kernel::{apply_matrix, kron, partial_trace, partial_trace_dense};
pub use legs::{Gate2, Gate3, LegTensor, Mat8, Rotation};
pub use operator::LocalOperator;
pub use qubit::{Pauli, QubitOp};
pub use state::{ChainState, LocalUnitary};

use nalgebra::DMatrix;

pub type C64 = num_complex::Complex<f64>;

/// Default tolerance for unitarity and equality checks (Frobenius norm).
pub const TOL: f64 = 1e-10;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// `||M M^dagger - I||_F` for a square matrix.
pub fn unitarity_residual(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let prod = m * m.adjoint();
    (prod - DMatrix::<C64>::identity(n, n)).norm()
}

/// Smallest `||a - e^{i theta} b||_F` over global phases `theta`.
pub fn phase_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let overlap: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
    (a - b.map(|z| z * phase)).norm()
}
