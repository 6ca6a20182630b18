use nalgebra::{DMatrix, Matrix4, SMatrix};

use super::{C64, TOL};
use crate::{Error, Result};

pub type Mat8 = SMatrix<C64, 8, 8>;

/// The two nontrivial spacetime rotations of a six-leg tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    /// `(4,1,2) -> (5,6,3)`: one step of pi/3.
    Tilde,
    /// `(5,4,1) -> (6,3,2)`: two steps of pi/3.
    Breve,
}

impl Rotation {
    /// New leg `k` reads old leg `perm[k]` (zero-based legs `a1..a6`).
    pub fn leg_permutation(self) -> [usize; 6] {
        match self {
            Rotation::Tilde => [3, 0, 1, 4, 5, 2],
            Rotation::Breve => [4, 3, 0, 5, 2, 1],
        }
    }
}

fn split(a: usize) -> [usize; 6] {
    // a = a1 a2 a3 a4 a5 a6 with a1 the most significant bit
    let mut legs = [0; 6];
    for (k, leg) in legs.iter_mut().enumerate() {
        *leg = (a >> (5 - k)) & 1;
    }
    legs
}

fn triple(a: usize, b: usize, c: usize) -> usize {
    4 * a + 2 * b + c
}

/// A rank-6 binary tensor in the crate-wide leg convention; not necessarily
/// unitary as a map `(a1,a2,a3) -> (a4,a5,a6)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LegTensor(Mat8);

impl LegTensor {
    pub fn from_matrix(m: Mat8) -> Self {
        LegTensor(m)
    }

    pub fn from_dmatrix(m: &DMatrix<C64>) -> Result<Self> {
        if m.nrows() != 8 || m.ncols() != 8 {
            return Err(Error::InvalidParameter(format!("expected an 8x8 matrix, got {}x{}", m.nrows(), m.ncols())));
        }
        Ok(LegTensor(Mat8::from_fn(|r, c| m[(r, c)])))
    }

    pub fn matrix(&self) -> &Mat8 {
        &self.0
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_fn(8, 8, |r, c| self.0[(r, c)])
    }

    /// Tensor element `U^{a4 a5 a6}_{a1 a2 a3}` with `legs = [a1, ..., a6]`.
    pub fn get(&self, legs: [usize; 6]) -> C64 {
        self.0[(triple(legs[3], legs[4], legs[5]), triple(legs[0], legs[1], legs[2]))]
    }

    /// Relabels legs: new leg `k` is old leg `perm[k]`.
    pub fn permute_legs(&self, perm: [usize; 6]) -> LegTensor {
        let mut out = Mat8::zeros();
        for a in 0..64 {
            let old = split(a);
            let new: [usize; 6] = std::array::from_fn(|k| old[perm[k]]);
            out[(triple(new[3], new[4], new[5]), triple(new[0], new[1], new[2]))] = self.get(old);
        }
        LegTensor(out)
    }

    /// `U~^{a5 a6 a3}_{a4 a1 a2} = U^{a4 a5 a6}_{a1 a2 a3}` (Tilde) and
    /// `U^^{a6 a3 a2}_{a5 a4 a1} = U^{a4 a5 a6}_{a1 a2 a3}` (Breve).
    pub fn reshuffle(&self, rotation: Rotation) -> LegTensor {
        self.permute_legs(rotation.leg_permutation())
    }

    /// The map from the three `inputs` legs to the remaining legs, both
    /// ordered by ascending leg label.
    pub fn bipartition_map(&self, inputs: [usize; 3]) -> Mat8 {
        let mut ins = inputs;
        ins.sort_unstable();
        let outs: Vec<usize> = (0..6).filter(|l| !ins.contains(l)).collect();
        let mut perm = [0; 6];
        perm[..3].copy_from_slice(&ins);
        perm[3..].copy_from_slice(&outs);
        *self.permute_legs(perm).matrix()
    }

    /// `||M M^dagger - I||_F` of the conventional arrow `(1,2,3) -> (4,5,6)`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.0 * self.0.adjoint() - Mat8::identity()).norm()
    }

    pub fn entries_row_major(&self) -> Vec<C64> {
        (0..8).flat_map(|r| (0..8).map(move |c| (r, c))).map(|(r, c)| self.0[(r, c)]).collect()
    }
}

/// A unitary three-qubit gate in the crate-wide leg convention.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate3(LegTensor);

impl Gate3 {
    /// Validates unitarity within `1e-10`.
    pub fn from_matrix(m: Mat8) -> Result<Self> {
        let t = LegTensor(m);
        let res = t.unitarity_residual();
        if res > TOL {
            return Err(Error::NotUnitary(res));
        }
        Ok(Gate3(t))
    }

    pub fn from_dmatrix(m: &DMatrix<C64>) -> Result<Self> {
        Gate3::from_matrix(*LegTensor::from_dmatrix(m)?.matrix())
    }

    /// Skips validation; the caller vouches for unitarity.
    pub(crate) fn from_matrix_unchecked(m: Mat8) -> Self {
        Gate3(LegTensor(m))
    }

    pub fn identity() -> Self {
        Gate3(LegTensor(Mat8::identity()))
    }

    /// `SWAP_{1,3} (x) 1_2`.
    pub fn swap13() -> Self {
        let mut m = Mat8::zeros();
        for a in 0..8 {
            let (a1, a2, a3) = (a >> 2, (a >> 1) & 1, a & 1);
            m[(triple(a3, a2, a1), a)] = super::ONE;
        }
        Gate3(LegTensor(m))
    }

    pub fn tensor(&self) -> &LegTensor {
        &self.0
    }

    pub fn matrix(&self) -> &Mat8 {
        &self.0 .0
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        self.0.to_dmatrix()
    }

    pub fn dagger(&self) -> Gate3 {
        Gate3(LegTensor(self.matrix().adjoint()))
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &Gate3) -> Gate3 {
        Gate3(LegTensor(self.matrix() * first.matrix()))
    }

    pub fn reshuffle(&self, rotation: Rotation) -> LegTensor {
        self.0.reshuffle(rotation)
    }

    /// Spatial mirror image: qubits 1 and 3 exchanged on both sides.
    pub fn mirrored(&self) -> Gate3 {
        let s = Gate3::swap13();
        Gate3(LegTensor(s.matrix() * self.matrix() * s.matrix()))
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.0.unitarity_residual()
    }
}

/// A unitary two-qubit gate, `M[(o1 o2), (i1 i2)]` with qubit 1 the MSB.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate2(pub Matrix4<C64>);

impl Gate2 {
    pub fn from_matrix(m: Matrix4<C64>) -> Result<Self> {
        let g = Gate2(m);
        let res = g.unitarity_residual();
        if res > TOL {
            return Err(Error::NotUnitary(res));
        }
        Ok(g)
    }

    pub fn swap() -> Self {
        let mut m = Matrix4::zeros();
        for a in 0..4 {
            m[(((a & 1) << 1) | (a >> 1), a)] = super::ONE;
        }
        Gate2(m)
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn unitarity_residual(&self) -> f64 {
        (self.0 * self.0.adjoint() - Matrix4::identity()).norm()
    }

    /// Spacetime dual `U~_{i1 i2}^{o1 o2} = U_{i1 o1}^{i2 o2}`.
    pub fn dual(&self) -> Matrix4<C64> {
        Matrix4::from_fn(|out, inp| {
            let (o1, o2) = (out >> 1, out & 1);
            let (i1, i2) = (inp >> 1, inp & 1);
            self.0[((i2 << 1) | o2, (i1 << 1) | o1)]
        })
    }

    pub fn dual_residual(&self) -> f64 {
        let d = self.dual();
        (d * d.adjoint() - Matrix4::identity()).norm()
    }

    pub fn is_dual_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() < tol && self.dual_residual() < tol
    }
}
