use serde::Serialize;

use crate::tensor::Mat8;
use crate::tensor::{LegTensor, Rotation};

/// Tolerance of the tri-unitarity and perfectness predicates.
pub const TRI_TOL: f64 = 1e-9;

/// Frobenius residuals `||M M^dagger - 1||` for `M` in `{U, U~, U^}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriUnitarityReport {
    pub residuals: [f64; 3],
    pub tri_unitary: bool,
}

fn residual(m: &Mat8) -> f64 {
    (m * m.adjoint() - Mat8::identity()).norm()
}

pub fn is_triunitary(g: &LegTensor) -> TriUnitarityReport {
    let residuals = [
        g.unitarity_residual(),
        g.reshuffle(Rotation::Tilde).unitarity_residual(),
        g.reshuffle(Rotation::Breve).unitarity_residual(),
    ];
    TriUnitarityReport { residuals, tri_unitary: residuals.iter().all(|&r| r < TRI_TOL) }
}

/// The ten 3-vs-3 bipartitions, identified by the input set containing leg 1
/// (zero-based leg 0).
pub fn perfect_bipartitions() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(10);
    for i in 1..6 {
        for j in i + 1..6 {
            out.push([0, i, j]);
        }
    }
    out
}

/// Unitarity of every 3-vs-3 leg bipartition; a map and its reverse are
/// unitary together, so ten checks cover all twenty ordered splits.
pub fn is_perfect(g: &LegTensor) -> bool {
    perfect_bipartitions().iter().all(|&ins| residual(&g.bipartition_map(ins)) < TRI_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Gate3;

    #[test]
    fn swap_is_triunitary_not_perfect() {
        let s = Gate3::swap13();
        assert!(is_triunitary(s.tensor()).tri_unitary);
        assert!(!is_perfect(s.tensor()));
        // legs (1,2,6) -> (3,4,5) carry at most two bits
        assert!(residual(&s.tensor().bipartition_map([0, 1, 5])) > 1.0);
    }

    #[test]
    fn identity_fails_rotated_arrows() {
        let r = is_triunitary(Gate3::identity().tensor());
        assert!(!r.tri_unitary);
        assert!(r.residuals[0] < 1e-15 && r.residuals[1] > 1.0);
        assert!(!is_perfect(Gate3::identity().tensor()));
    }

    #[test]
    fn ten_bipartitions() {
        let b = perfect_bipartitions();
        assert_eq!(b.len(), 10);
        assert!(b.contains(&[0, 1, 2]) && b.contains(&[0, 4, 5]));
    }
}
