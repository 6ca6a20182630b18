use crate::tensor::Mat8;
use crate::tensor::{ChainState, Gate3, QubitOp, C64};

const STABILIZER: [char; 5] = ['X', 'Z', 'Z', 'X', 'I'];

fn pauli(c: char) -> QubitOp {
    match c {
        'X' => QubitOp::x(),
        'Z' => QubitOp::z(),
        _ => QubitOp::identity(),
    }
}

/// `(1 + g) / 2` applied to `psi` for the cyclic shift `shift` of XZZXI.
fn project(psi: &ChainState, shift: usize) -> ChainState {
    let mut g_psi = psi.clone();
    for site in 0..5 {
        let c = STABILIZER[(site + 5 - shift) % 5];
        g_psi.apply(&pauli(c), &[site]).expect("valid site");
    }
    let amps = psi.amplitudes().iter().zip(g_psi.amplitudes()).map(|(a, b)| (a + b) * 0.5).collect();
    ChainState::from_amplitudes(amps).expect("32 amplitudes")
}

fn logical_zero() -> ChainState {
    let mut psi = ChainState::zeros(5).expect("small register");
    for shift in 0..4 {
        psi = project(&psi, shift);
    }
    let norm = psi.norm();
    ChainState::from_amplitudes(psi.amplitudes().iter().map(|a| a / norm).collect()).expect("32 amplitudes")
}

/// The six-qubit absolutely maximally entangled state
/// `(|0>|0_L> + |1>|1_L>)/sqrt(2)` of the five-qubit code, as 64 amplitudes
/// indexed by `(a1, ..., a6)` with `a1` the logical leg and most significant.
pub fn ame_state() -> Vec<C64> {
    let zero = logical_zero();
    let mut one = zero.clone();
    for site in 0..5 {
        one.apply(&QubitOp::x(), &[site]).expect("valid site");
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<C64> = zero.amplitudes().iter().map(|a| a * s).collect();
    out.extend(one.amplitudes().iter().map(|a| a * s));
    out
}

/// The AME state read as a gate: legs `(a1, a2, a3)` in, `(a4, a5, a6)` out,
/// scaled by `sqrt(8)` so every 3-vs-3 bipartition is unitary.
pub fn perfect_tensor() -> Gate3 {
    let psi = ame_state();
    let scale = 8f64.sqrt();
    Gate3::from_matrix_unchecked(Mat8::from_fn(|out, inp| psi[(inp << 3) | out] * scale))
}
