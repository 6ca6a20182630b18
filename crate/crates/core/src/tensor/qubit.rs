use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::{C64, ONE, ZERO};

/// Single-qubit operator stored as a 2x2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitOp(pub Matrix2<C64>);

impl QubitOp {
    pub fn new(m: Matrix2<C64>) -> Self {
        QubitOp(m)
    }

    pub fn identity() -> Self {
        QubitOp(Matrix2::identity())
    }

    pub fn x() -> Self {
        QubitOp(Matrix2::new(ZERO, ONE, ONE, ZERO))
    }

    pub fn y() -> Self {
        let i = C64::i();
        QubitOp(Matrix2::new(ZERO, -i, i, ZERO))
    }

    pub fn z() -> Self {
        QubitOp(Matrix2::new(ONE, ZERO, ZERO, -ONE))
    }

    /// `exp(-i theta P)` for a Pauli `P`.
    pub fn pauli_rotation(p: Pauli, theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        QubitOp(Matrix2::identity().scale(c) * ONE - p.op().0 * C64::new(0.0, s))
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn dagger(&self) -> Self {
        QubitOp(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn mul(&self, other: &QubitOp) -> QubitOp {
        QubitOp(self.0 * other.0)
    }

    pub fn scale(&self, s: C64) -> QubitOp {
        QubitOp(self.0 * s)
    }

    pub fn unitarity_residual(&self) -> f64 {
        (self.0 * self.0.adjoint() - Matrix2::identity()).norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() < tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.0 - self.0.adjoint()).norm() < tol
    }

    pub fn det(&self) -> C64 {
        self.0[(0, 0)] * self.0[(1, 1)] - self.0[(0, 1)] * self.0[(1, 0)]
    }

    /// Row-major entries.
    pub fn entries(&self) -> [C64; 4] {
        [self.0[(0, 0)], self.0[(0, 1)], self.0[(1, 0)], self.0[(1, 1)]]
    }

    /// Coefficients `Tr(sigma_alpha A) / 2` in the basis order `(I, X, Y, Z)`.
    pub fn pauli_coefficients(&self) -> [C64; 4] {
        Pauli::ALL.map(|p| (p.op().0 * self.0).trace() * 0.5)
    }

    pub fn from_pauli_coefficients(c: [C64; 4]) -> Self {
        let mut m = Matrix2::zeros();
        for (p, ci) in Pauli::ALL.iter().zip(c) {
            m += p.op().0 * ci;
        }
        QubitOp(m)
    }
}

/// Pauli labels in the fixed basis order `(I, X, Y, Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const TRACELESS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn op(self) -> QubitOp {
        match self {
            Pauli::I => QubitOp::identity(),
            Pauli::X => QubitOp::x(),
            Pauli::Y => QubitOp::y(),
            Pauli::Z => QubitOp::z(),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

impl FromStr for Pauli {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(Pauli::I),
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            other => Err(crate::Error::Parse(format!("unknown Pauli label {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &QubitOp, b: &QubitOp) -> bool {
        (a.0 - b.0).norm() < 1e-12
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (QubitOp::x(), QubitOp::y(), QubitOp::z());
        let i = C64::i();
        assert!(close(&x.mul(&y), &z.scale(i)));
        assert!(close(&y.mul(&z), &x.scale(i)));
        assert!(close(&z.mul(&x), &y.scale(i)));
        for p in Pauli::ALL {
            assert!(close(&p.op().mul(&p.op()), &QubitOp::identity()));
            assert!(p.op().is_hermitian(1e-12));
        }
    }

    #[test]
    fn rotation_is_unitary_and_periodic() {
        let r = QubitOp::pauli_rotation(Pauli::X, 0.37);
        assert!(r.is_unitary(1e-12));
        let full = QubitOp::pauli_rotation(Pauli::Y, std::f64::consts::PI);
        assert!(close(&full, &QubitOp::identity().scale(-ONE)));
    }

    #[test]
    fn pauli_coefficients_roundtrip() {
        let a = QubitOp::x().scale(C64::new(0.3, 0.0)).mul(&QubitOp::pauli_rotation(Pauli::Z, 0.8));
        let back = QubitOp::from_pauli_coefficients(a.pauli_coefficients());
        assert!(close(&a, &back));
    }

    #[test]
    fn parse_labels() {
        assert_eq!("z".parse::<Pauli>().unwrap(), Pauli::Z);
        assert!("Q".parse::<Pauli>().is_err());
    }
}
