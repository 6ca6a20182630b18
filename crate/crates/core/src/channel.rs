//! Single-qubit transfer channels of a three-qubit gate, their Pauli transfer
//! matrices and spectra, and the ergodic hierarchy built on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use crate::gates::is_triunitary;
use crate::tensor::Mat8;
use crate::tensor::{partial_trace, Gate3, Pauli, QubitOp, C64};
use crate::{Error, Result};

/// Ray label: `Minus` for `x = -v t`, `Zero` for `x = 0`, `Plus` for `x = +v t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Minus,
    Zero,
    Plus,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Minus, Direction::Zero, Direction::Plus];

    /// `(output qubit carrying a, input qubit kept)` as zero-based positions.
    fn legs(self) -> (usize, usize) {
        match self {
            Direction::Minus => (2, 0),
            Direction::Zero => (1, 1),
            Direction::Plus => (0, 2),
        }
    }

    /// Sign of the ray velocity.
    pub fn sign(self) -> i64 {
        match self {
            Direction::Minus => -1,
            Direction::Zero => 0,
            Direction::Plus => 1,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Minus => "-",
            Direction::Zero => "0",
            Direction::Plus => "+",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "-" | "minus" => Ok(Direction::Minus),
            "0" | "zero" => Ok(Direction::Zero),
            "+" | "plus" => Ok(Direction::Plus),
            _ => Err(Error::Parse(format!("unknown direction {s:?}"))),
        }
    }
}

/// Unital CPTP map on one qubit, stored as its Pauli transfer matrix
/// `ptm[(alpha, beta)] = Tr(sigma_alpha M(sigma_beta)) / 2` in `(I, X, Y, Z)`
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleQubitChannel {
    pub ptm: Matrix4<f64>,
    pub direction: Direction,
}

/// `M_mu(a) = 1/4 Tr_{other two}[U^dagger (a on one output) U]`, evaluated
/// directly from the definition.
pub fn channel_action(g: &Gate3, mu: Direction, a: &QubitOp) -> QubitOp {
    let (out_leg, in_leg) = mu.legs();
    let a8: Mat8 = crate::gates::embed1(a, out_leg);
    let m = g.matrix().adjoint() * a8 * g.matrix();
    let dense = nalgebra::DMatrix::from_fn(8, 8, |r, c| m[(r, c)]);
    let reduced = partial_trace(&dense, &[in_leg]).expect("three-qubit operator");
    QubitOp::new(Matrix2::from_fn(|r, c| reduced[(r, c)] * 0.25))
}

pub fn transfer_channel(g: &Gate3, mu: Direction) -> Result<SingleQubitChannel> {
    let res = g.unitarity_residual();
    if res > 1e-8 {
        return Err(Error::NotUnitary(res));
    }
    let mut ptm = Matrix4::zeros();
    for beta in Pauli::ALL {
        let out = channel_action(g, mu, &beta.op());
        let coeffs = out.pauli_coefficients();
        for alpha in Pauli::ALL {
            ptm[(alpha.index(), beta.index())] = coeffs[alpha.index()].re;
        }
    }
    Ok(SingleQubitChannel { ptm, direction: mu })
}

/// Sorts by descending modulus, then descending real part, then descending
/// imaginary part; values closer than `1e-12` count as ties.
pub fn sort_spectrum(values: &mut [C64]) {
    let key = |a: f64, b: f64| if (a - b).abs() < 1e-12 { Ordering::Equal } else { b.total_cmp(&a) };
    values.sort_by(|x, y| key(x.norm(), y.norm()).then(key(x.re, y.re)).then(key(x.im, y.im)));
}

impl SingleQubitChannel {
    pub fn identity(direction: Direction) -> Self {
        SingleQubitChannel { ptm: Matrix4::identity(), direction }
    }

    /// Traceless `3x3` block acting on `(X, Y, Z)`.
    pub fn traceless_block(&self) -> Matrix3<f64> {
        self.ptm.fixed_view::<3, 3>(1, 1).into_owned()
    }

    pub fn apply(&self, a: &QubitOp) -> QubitOp {
        let c = a.pauli_coefficients();
        let out: [C64; 4] = std::array::from_fn(|alpha| (0..4).map(|beta| c[beta] * self.ptm[(alpha, beta)]).sum());
        QubitOp::from_pauli_coefficients(out)
    }

    /// `M^n`, i.e. `n` repeated applications.
    pub fn power(&self, n: usize) -> SingleQubitChannel {
        SingleQubitChannel { ptm: self.ptm.pow(n as u32), direction: self.direction }
    }

    /// Eigenvalues of the traceless block in the order of [`sort_spectrum`].
    pub fn spectrum(&self) -> [C64; 3] {
        let ev = self.traceless_block().complex_eigenvalues();
        let mut out = [ev[0], ev[1], ev[2]];
        sort_spectrum(&mut out);
        out
    }

    /// Choi matrix `sum_ij |i><j| (x) M(|i><j|)`.
    pub fn choi(&self) -> Matrix4<C64> {
        let mut choi = Matrix4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let mut e = Matrix2::zeros();
                e[(i, j)] = C64::new(1.0, 0.0);
                let out = self.apply(&QubitOp::new(e));
                for r in 0..2 {
                    for c in 0..2 {
                        choi[(2 * i + r, 2 * j + c)] = out.matrix()[(r, c)];
                    }
                }
            }
        }
        choi
    }

    /// Largest violation among trace preservation, unitality, Hermiticity
    /// preservation (real PTM is implicit) and Choi positivity.
    pub fn cptp_violation(&self) -> f64 {
        let row = (1..4).map(|k| self.ptm[(0, k)].abs()).fold((self.ptm[(0, 0)] - 1.0).abs(), f64::max);
        let col = (1..4).map(|k| self.ptm[(k, 0)].abs()).fold(0.0, f64::max);
        let choi = self.choi();
        let herm = (choi - choi.adjoint()).norm();
        let min_eig = choi.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        row.max(col).max(herm).max((-min_eig).max(0.0))
    }

    pub fn is_valid(&self) -> bool {
        self.cptp_violation() < 1e-9
    }
}

/// Phases of the ergodic hierarchy, from the channel spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HierarchyLabel {
    NonInteracting,
    InteractingNonErgodic,
    ErgodicNonMixing,
    ErgodicMixing,
    Bernoulli,
}

impl fmt::Display for HierarchyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Nine eigenvalues, three per direction in `(-, 0, +)` order, and the label.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyReport {
    pub eigenvalues: [[C64; 3]; 3],
    pub label: HierarchyLabel,
}

/// Eigenvalue tolerance of the classifier.
pub const HIERARCHY_TOL: f64 = 1e-9;

pub fn label_from_spectra(eigenvalues: &[[C64; 3]; 3]) -> HierarchyLabel {
    let all: Vec<C64> = eigenvalues.iter().flatten().copied().collect();
    let tau = HIERARCHY_TOL;
    let ones = all.iter().filter(|l| (*l - C64::new(1.0, 0.0)).norm() < tau).count();
    if ones == all.len() {
        HierarchyLabel::NonInteracting
    } else if ones > 0 {
        HierarchyLabel::InteractingNonErgodic
    } else if all.iter().any(|l| (l.norm() - 1.0).abs() < tau) {
        HierarchyLabel::ErgodicNonMixing
    } else if all.iter().all(|l| l.norm() < tau) {
        HierarchyLabel::Bernoulli
    } else {
        HierarchyLabel::ErgodicMixing
    }
}

pub fn classify_hierarchy(g: &Gate3) -> Result<HierarchyReport> {
    let report = is_triunitary(g.tensor());
    if !report.tri_unitary {
        return Err(Error::NotTriUnitary(report.residuals));
    }
    let mut eigenvalues = [[C64::new(0.0, 0.0); 3]; 3];
    for (slot, mu) in eigenvalues.iter_mut().zip(Direction::ALL) {
        *slot = transfer_channel(g, mu)?.spectrum();
    }
    Ok(HierarchyReport { label: label_from_spectra(&eigenvalues), eigenvalues })
}

fn check_traceless(op: &QubitOp) -> Result<()> {
    let tr = op.trace().norm();
    if tr > 1e-10 {
        return Err(Error::NotTraceless(tr));
    }
    Ok(())
}

/// `(1/2) Tr(b M_mu^n(a))` for traceless single-site `a` and `b`, with `n`
/// the number of channel applications along the ray.
pub fn predicted_ray_correlator(g: &Gate3, mu: Direction, a: &QubitOp, b: &QubitOp, n: usize) -> Result<C64> {
    check_traceless(a)?;
    check_traceless(b)?;
    let channel = transfer_channel(g, mu)?.power(n);
    Ok(b.mul(&channel.apply(a)).trace() * 0.5)
}

/// Closed forms for the symmetric gate `U(phi, g)` whose channels coincide
/// for all three directions.
pub mod appendix {
    use nalgebra::Matrix4;

    use crate::tensor::C64;

    /// Pauli transfer matrix in `(I, X, Y, Z)` order.
    pub fn ptm(phi: f64, g: f64) -> Matrix4<f64> {
        let c2 = (phi / 2.0).cos().powi(2);
        let (s, c) = (2.0 * g).sin_cos();
        Matrix4::new(1.0, 0.0, 0.0, 0.0, 0.0, c2, 0.0, 0.0, 0.0, 0.0, c * c2, s, 0.0, 0.0, -s * c2, c)
    }

    /// `f(phi, g)^2 = -13 - 20 cos(phi) + 2 cos(4g) (3 + cos(phi))^2 + cos(2 phi)`.
    pub fn f(phi: f64, g: f64) -> C64 {
        let v = -13.0 - 20.0 * phi.cos() + 2.0 * (4.0 * g).cos() * (3.0 + phi.cos()).powi(2) + (2.0 * phi).cos();
        C64::new(v, 0.0).sqrt()
    }

    /// `cos(phi/2)^2` and `(1/4) cos(2g)(3 + cos(phi)) +- f/8`.
    pub fn eigenvalues(phi: f64, g: f64) -> [C64; 3] {
        let mid = C64::new(0.25 * (2.0 * g).cos() * (3.0 + phi.cos()), 0.0);
        let f = f(phi, g);
        [C64::new((phi / 2.0).cos().powi(2), 0.0), mid + f / 8.0, mid - f / 8.0]
    }

    /// `h_pm` with eigenoperators `h_pm Y + Z` for the `+-f` eigenvalues.
    pub fn eigenoperator_ratios(phi: f64, g: f64) -> [C64; 2] {
        let f = f(phi, g);
        let base = C64::new(4.0 * (2.0 * g).cos() * (phi / 2.0).sin().powi(2), 0.0);
        let num = C64::new(8.0 * (2.0 * g).sin(), 0.0);
        [num / (base + f), num / (base - f)]
    }
}
