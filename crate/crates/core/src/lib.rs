//! Exact simulation and verification toolkit for circuits of tri-unitary gates.
//!
//! A tri-unitary gate is a three-qubit gate whose six legs stay unitary under
//! three contiguous input/output bipartitions. Arranged on a triangular
//! spacetime lattice (1+1D) or a cubic lattice realized on a kagome qubit array
//! (2+1D), such gates confine two-point correlations to three rays, along which
//! correlations are given by iterating single-qubit quantum channels.
//!
//! Module map:
//!
//! - [`tensor`]: complex primitives, leg reshuffles, partial traces, state and
//!   operator kernels.
//! - [`gates`]: gate families (controlled phase, dual-unitary, the 31-parameter
//!   tri-unitary family, perfect tensor, kicked Ising) and their predicates.
//! - [`channel`]: transfer channels, Pauli transfer matrices, spectra and the
//!   ergodic hierarchy.
//! - [`chain`]: the triangular brickwork circuit and brute-force correlators.
//! - [`entanglement`]: solvable initial states and entropy growth experiments.
//! - [`kagome`]: the 2+1D circuit on a kagome array with ancillas.
//! - [`io`]: CSV datasets and gate JSON files.

pub mod chain;
pub mod channel;
pub mod entanglement;
pub mod error;
pub mod gates;
pub mod io;
pub mod kagome;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{Gate2, Gate3, LegTensor, Pauli, QubitOp, C64};
