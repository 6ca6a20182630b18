use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use super::predicates::is_triunitary;
use crate::tensor::Mat8;
use crate::tensor::{Gate2, Gate3, Pauli, QubitOp, C64};
use crate::{Error, Result};

/// `CP(phi) = exp(-i (phi/4) (Z_1 - 1)(Z_2 - 1)) = diag(1, 1, 1, e^{-i phi})`.
pub fn cp_gate(phi: f64) -> Gate2 {
    let mut m = Matrix4::identity();
    m[(3, 3)] = C64::from_polar(1.0, -phi);
    Gate2(m)
}

fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, c| a[(r >> 1, c >> 1)] * b[(r & 1, c & 1)])
}

/// `u1 u2 . SWAP . CP(phi) . v1 v2`.
pub fn dual_unitary_gate(phi: f64, u1: &QubitOp, u2: &QubitOp, v1: &QubitOp, v2: &QubitOp) -> Result<Gate2> {
    for op in [u1, u2, v1, v2] {
        if !op.is_unitary(1e-10) {
            return Err(Error::NotUnitary(op.unitarity_residual()));
        }
    }
    let m = kron2(u1.matrix(), u2.matrix()) * Gate2::swap().0 * cp_gate(phi).0 * kron2(v1.matrix(), v2.matrix());
    Gate2::from_matrix(m)
}

/// A single-qubit gate on qubit `q` (0, 1 or 2) of a three-qubit register.
pub fn embed1(op: &QubitOp, q: usize) -> Mat8 {
    assert!(q < 3, "qubit position {q} out of range");
    let shift = 2 - q;
    let m = op.matrix();
    Mat8::from_fn(|r, c| {
        if (r ^ c) & !(1 << shift) != 0 {
            C64::new(0.0, 0.0)
        } else {
            m[((r >> shift) & 1, (c >> shift) & 1)]
        }
    })
}

/// A two-qubit gate with its qubit 1 on position `qa` and qubit 2 on `qb`.
pub fn embed2(g: &Matrix4<C64>, qa: usize, qb: usize) -> Mat8 {
    assert!(qa < 3 && qb < 3 && qa != qb, "invalid qubit positions ({qa}, {qb})");
    let (sa, sb) = (2 - qa, 2 - qb);
    let mask = (1 << sa) | (1 << sb);
    let local = |i: usize| (((i >> sa) & 1) << 1) | ((i >> sb) & 1);
    Mat8::from_fn(|r, c| if (r ^ c) & !mask != 0 { C64::new(0.0, 0.0) } else { g[(local(r), local(c))] })
}

/// ZYZ Euler angles of an SU(2) element: `Rz(alpha) Ry(beta) Rz(gamma)` with
/// `Rz(theta) = exp(-i theta Z / 2)` and `Ry(theta) = exp(-i theta Y / 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Euler {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Euler {
    pub const IDENTITY: Euler = Euler { alpha: 0.0, beta: 0.0, gamma: 0.0 };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Euler { alpha, beta, gamma }
    }

    pub fn op(&self) -> QubitOp {
        let rz = |t: f64| QubitOp::pauli_rotation(Pauli::Z, t / 2.0);
        let ry = QubitOp::pauli_rotation(Pauli::Y, self.beta / 2.0);
        rz(self.alpha).mul(&ry).mul(&rz(self.gamma))
    }

    /// Angles of a unitary, discarding its global phase.
    pub fn from_op(u: &QubitOp) -> Result<Euler> {
        if !u.is_unitary(1e-10) {
            return Err(Error::NotUnitary(u.unitarity_residual()));
        }
        let det = u.det();
        let s = u.scale(C64::from_polar(1.0, -det.arg() / 2.0));
        // s = [[p, -q*], [q, p*]]
        let m = s.matrix();
        let (p, q) = (m[(0, 0)], m[(1, 0)]);
        let beta = 2.0 * q.norm().atan2(p.norm());
        let (ap, aq) = (p.arg(), if q.norm() > 0.0 { q.arg() } else { 0.0 });
        Ok(Euler { alpha: aq - ap, beta, gamma: -ap - aq })
    }

    fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()
    }
}

/// The 31 real parameters of the controlled-phase tri-unitary family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriUnitaryParams {
    /// Interaction angles `(phi_1, phi_2, phi_3)` of `CP_12`, `CP_23`, `CP_31`.
    pub phi: [f64; 3],
    /// Output dressing `u_1, u_2, u_3`.
    pub u: [Euler; 3],
    /// Middle dressing `v_1, v_2, v_3`.
    pub v: [Euler; 3],
    /// Input dressing `w_1, w_2, w_3`.
    pub w: [Euler; 3],
    pub global_phase: f64,
}

impl TriUnitaryParams {
    pub const N_PARAMS: usize = 31;

    /// Bare controlled-phase skeleton with all dressings set to the identity.
    pub fn bare(phi: [f64; 3]) -> Self {
        TriUnitaryParams {
            phi,
            u: [Euler::IDENTITY; 3],
            v: [Euler::IDENTITY; 3],
            w: [Euler::IDENTITY; 3],
            global_phase: 0.0,
        }
    }

    /// Flattened as `phi, u, v, w, global_phase` with each Euler triple in
    /// `(alpha, beta, gamma)` order.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut out = self.phi.to_vec();
        for e in self.u.iter().chain(&self.v).chain(&self.w) {
            out.extend([e.alpha, e.beta, e.gamma]);
        }
        out.push(self.global_phase);
        out
    }

    pub fn from_slice(x: &[f64]) -> Result<Self> {
        if x.len() != Self::N_PARAMS {
            return Err(Error::InvalidParameter(format!("expected {} parameters, got {}", Self::N_PARAMS, x.len())));
        }
        let e = |k: usize| Euler::new(x[3 + 3 * k], x[4 + 3 * k], x[5 + 3 * k]);
        Ok(TriUnitaryParams {
            phi: [x[0], x[1], x[2]],
            u: [e(0), e(1), e(2)],
            v: [e(3), e(4), e(5)],
            w: [e(6), e(7), e(8)],
            global_phase: x[30],
        })
    }

    pub fn validate(&self) -> Result<()> {
        let angles_ok = self.phi.iter().all(|p| p.is_finite()) && self.global_phase.is_finite();
        let eulers_ok = self.u.iter().chain(&self.v).chain(&self.w).all(Euler::is_finite);
        if angles_ok && eulers_ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("non-finite tri-unitary parameter".into()))
        }
    }
}

/// `e^{i theta} u1 u2 u3 . SWAP_31 . CP_31(phi3) . v1 v3 . CP_23(phi2) . v2 .
/// CP_12(phi1) . w1 w2 w3`.
///
/// The product is unitary for `(1,2,3)`, `(4,1,2)` and the non-contiguous
/// `(1,3,5)` split for any parameters, but the `(5,4,1)` arrow survives only
/// when at most two of `v1, v2, v3` fail to commute with `Z`. Members that
/// are not tri-unitary are rejected with [`Error::NotTriUnitary`].
pub fn triunitary_gate(p: &TriUnitaryParams) -> Result<Gate3> {
    p.validate()?;
    let layer = |e: &[Euler; 3]| embed1(&e[0].op(), 0) * embed1(&e[1].op(), 1) * embed1(&e[2].op(), 2);
    let [phi1, phi2, phi3] = p.phi;
    let m = layer(&p.u)
        * Gate3::swap13().matrix()
        * embed2(&cp_gate(phi3).0, 2, 0)
        * embed1(&p.v[0].op(), 0)
        * embed1(&p.v[2].op(), 2)
        * embed2(&cp_gate(phi2).0, 1, 2)
        * embed1(&p.v[1].op(), 1)
        * embed2(&cp_gate(phi1).0, 0, 1)
        * layer(&p.w);
    let g = Gate3::from_matrix(m * C64::from_polar(1.0, p.global_phase))?;
    let report = is_triunitary(g.tensor());
    if report.tri_unitary {
        Ok(g)
    } else {
        Err(Error::NotTriUnitary(report.residuals))
    }
}

/// `SWAP_31 . exp(-i (phi/4)(Z1 Z2 + Z2 Z3 + Z3 Z1)) . exp(-i g (X1 + X2 + X3))`.
///
/// Equal, up to a global phase, to the family member with `phi_i = phi`,
/// trivial `u` and `v`, and `w_i = exp(-i (phi/2) Z) exp(-i g X)`.
pub fn appendix_gate(phi: f64, g: f64) -> Gate3 {
    let zz = Mat8::from_fn(|r, c| {
        if r != c {
            return C64::new(0.0, 0.0);
        }
        let z: [f64; 3] = std::array::from_fn(|k| if (r >> (2 - k)) & 1 == 0 { 1.0 } else { -1.0 });
        let s = z[0] * z[1] + z[1] * z[2] + z[2] * z[0];
        C64::from_polar(1.0, -phi / 4.0 * s)
    });
    let kick = QubitOp::pauli_rotation(Pauli::X, g);
    let m = Gate3::swap13().matrix() * zz * embed1(&kick, 0) * embed1(&kick, 1) * embed1(&kick, 2);
    Gate3::from_matrix_unchecked(m)
}

/// The family parameters reproducing [`appendix_gate`] up to a global phase.
pub fn appendix_params(phi: f64, g: f64) -> TriUnitaryParams {
    let w = Euler::from_op(&QubitOp::pauli_rotation(Pauli::Z, phi / 2.0).mul(&QubitOp::pauli_rotation(Pauli::X, g)))
        .expect("rotations are unitary");
    TriUnitaryParams { w: [w; 3], ..TriUnitaryParams::bare([phi; 3]) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::phase_distance;
    use std::f64::consts::PI;

    #[test]
    fn cp_values() {
        assert_eq!(cp_gate(0.0).0, Matrix4::identity());
        let cz = cp_gate(PI).0;
        assert!((cz[(3, 3)] + C64::new(1.0, 0.0)).norm() < 1e-15);
        let expo = Matrix4::from_fn(|r, c| {
            if r != c {
                return C64::new(0.0, 0.0);
            }
            let z1 = if r >> 1 == 0 { 1.0 } else { -1.0 };
            let z2 = if r & 1 == 0 { 1.0 } else { -1.0 };
            C64::from_polar(1.0, -0.3 / 4.0 * (z1 - 1.0) * (z2 - 1.0))
        });
        assert!((cp_gate(0.3).0 - expo).norm() < 1e-15);
    }

    #[test]
    fn dual_unitary_examples() {
        let id = QubitOp::identity();
        let g = dual_unitary_gate(0.0, &id, &id, &id, &id).unwrap();
        assert_eq!(g, Gate2::swap());
        let g = dual_unitary_gate(PI, &id, &id, &id, &id).unwrap();
        assert!(g.is_dual_unitary(1e-10));
        let bad = QubitOp::identity().scale(C64::new(2.0, 0.0));
        assert!(dual_unitary_gate(0.1, &bad, &id, &id, &id).is_err());
    }

    #[test]
    fn embedding_positions() {
        let x0 = embed1(&QubitOp::x(), 0);
        assert_eq!(x0[(0b100, 0b000)], C64::new(1.0, 0.0));
        let swap02 = embed2(&Gate2::swap().0, 0, 2);
        assert_eq!(swap02, *Gate3::swap13().matrix());
    }

    #[test]
    fn euler_round_trip() {
        let u = QubitOp::pauli_rotation(Pauli::X, 0.4).mul(&QubitOp::pauli_rotation(Pauli::Z, -1.1));
        let e = Euler::from_op(&u).unwrap();
        let a = nalgebra::DMatrix::from_fn(2, 2, |r, c| u.matrix()[(r, c)]);
        let b = nalgebra::DMatrix::from_fn(2, 2, |r, c| e.op().matrix()[(r, c)]);
        assert!(phase_distance(&a, &b) < 1e-12);
    }

    #[test]
    fn trivial_family_member_is_swap() {
        let g = triunitary_gate(&TriUnitaryParams::bare([0.0; 3])).unwrap();
        assert_eq!(g, Gate3::swap13());
    }

    #[test]
    fn phi3_pi_is_dual_unitary_on_outer_qubits() {
        let g = triunitary_gate(&TriUnitaryParams::bare([0.0, 0.0, PI])).unwrap();
        let du = embed2(&(Gate2::swap().0 * cp_gate(PI).0), 0, 2);
        assert!((g.matrix() - du).norm() < 1e-14);
    }

    #[test]
    fn three_generic_middle_gates_break_one_arrow() {
        let mut p = TriUnitaryParams::bare([0.7, 1.3, 2.1]);
        let a = Euler::new(0.3, 1.1, -0.4);
        p.v = [a, Euler::new(-0.9, 0.6, 0.2), a];
        match triunitary_gate(&p) {
            Err(Error::NotTriUnitary(r)) => assert!(r[0] < 1e-12 && r[1] < 1e-12 && r[2] > 1e-3),
            other => panic!("expected a broken arrow, got {other:?}"),
        }
        p.v[1] = Euler::IDENTITY;
        assert!(triunitary_gate(&p).is_ok());
    }

    #[test]
    fn rejects_nonfinite_params() {
        let p = TriUnitaryParams::bare([f64::NAN, 0.0, 0.0]);
        assert!(triunitary_gate(&p).is_err());
        assert!(TriUnitaryParams::from_slice(&[0.0; 30]).is_err());
        let q = TriUnitaryParams::from_slice(&(0..31).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
        assert_eq!(q.to_vec().len(), 31);
        assert_eq!(q.to_vec()[30], 30.0);
    }
}
