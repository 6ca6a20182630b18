use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::chain::{dense_unitary, Boundary, PlacedGate};
use crate::tensor::{Pauli, QubitOp, C64};
use crate::{Error, Result};

/// Couplings of the two-sublattice kicked Ising chain. Sublattice A is the
/// even sites, B the odd sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KickedIsingParams {
    /// Next-nearest-neighbour coupling within A.
    pub j: f64,
    /// Transverse field on A.
    pub b: f64,
    /// Transverse field on each B site (`L/2` values, B site `2k+1` at `k`).
    pub b_prime: Vec<f64>,
    /// Nearest-neighbour coupling on bond `(n, n+1)`; `L` values for periodic
    /// chains, `L-1` for open ones.
    pub j_prime: Vec<f64>,
    /// Optional longitudinal field on every site, present in both Ising stages.
    pub h: Option<Vec<f64>>,
}

impl KickedIsingParams {
    pub fn uniform(l: usize, boundary: Boundary, j: f64, b: f64, b_prime: f64, j_prime: f64) -> Self {
        KickedIsingParams {
            j,
            b,
            b_prime: vec![b_prime; l / 2],
            j_prime: vec![j_prime; bond_count(l, boundary)],
            h: None,
        }
    }

    /// The self-dual point `J = b = pi/4`.
    pub fn is_triunitary_point(&self, tol: f64) -> bool {
        let q = std::f64::consts::FRAC_PI_4;
        (self.j.abs() - q).abs() < tol && (self.b.abs() - q).abs() < tol
    }

    fn validate(&self, l: usize, boundary: Boundary) -> Result<()> {
        if l < 4 || !l.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("kicked Ising chain needs even L >= 4, got {l}")));
        }
        if self.b_prime.len() != l / 2 {
            return Err(Error::InvalidParameter(format!("b' needs {} values", l / 2)));
        }
        if self.j_prime.len() != bond_count(l, boundary) {
            return Err(Error::InvalidParameter(format!("J' needs {} values", bond_count(l, boundary))));
        }
        if let Some(h) = &self.h {
            if h.len() != l {
                return Err(Error::InvalidParameter(format!("h needs {l} values")));
            }
        }
        Ok(())
    }
}

fn bond_count(l: usize, boundary: Boundary) -> usize {
    match boundary {
        Boundary::Periodic => l,
        Boundary::Open => l - 1,
    }
}

fn zz(theta: f64, sites: [usize; 2]) -> PlacedGate {
    let gate = DMatrix::from_fn(4, 4, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else {
            let parity = if (r >> 1) ^ (r & 1) == 0 { 1.0 } else { -1.0 };
            C64::from_polar(1.0, -theta * parity)
        }
    });
    PlacedGate { sites: sites.to_vec(), gate }
}

fn single(op: QubitOp, site: usize) -> PlacedGate {
    PlacedGate { sites: vec![site], gate: DMatrix::from_fn(2, 2, |r, c| op.matrix()[(r, c)]) }
}

/// The Floquet operator as two half periods, each listed in time order:
/// `exp(-i(H_ZZ^AA + H_ZZ^AB)) ` then `exp(-i H_X)`, followed by
/// `exp(-i H_ZZ^AA)` then `exp(-i H_X)`.
pub fn kicked_ising_half_periods(l: usize, p: &KickedIsingParams, boundary: Boundary) -> Result<[Vec<PlacedGate>; 2]> {
    p.validate(l, boundary)?;
    let next = |n: usize, d: usize| -> Option<usize> {
        match boundary {
            Boundary::Periodic => Some((n + d) % l),
            Boundary::Open => (n + d < l).then_some(n + d),
        }
    };
    let mut aa = Vec::new();
    for n in (0..l).step_by(2) {
        if let Some(m) = next(n, 2) {
            aa.push(zz(p.j, [n, m]));
        }
    }
    if let Some(h) = &p.h {
        aa.extend(h.iter().enumerate().map(|(n, &hn)| single(QubitOp::pauli_rotation(Pauli::Z, hn), n)));
    }
    let mut ab = Vec::new();
    for (n, &jp) in p.j_prime.iter().enumerate() {
        let m = next(n, 1).expect("bond count matches boundary");
        ab.push(zz(jp, [n, m]));
    }
    let kicks: Vec<PlacedGate> = (0..l)
        .map(|n| {
            let angle = if n % 2 == 0 { p.b } else { p.b_prime[n / 2] };
            single(QubitOp::pauli_rotation(Pauli::X, angle), n)
        })
        .collect();

    let mut first = aa.clone();
    first.extend(ab);
    first.extend(kicks.iter().cloned());
    let mut second = aa;
    second.extend(kicks);
    Ok([first, second])
}

/// Dense Floquet operator
/// `U_F = e^{-iH_X} e^{-iH_Z^AA} e^{-iH_X} e^{-i(H_Z^AA + H_Z^AB)}`.
pub fn kicked_ising_floquet(l: usize, p: &KickedIsingParams, boundary: Boundary) -> Result<DMatrix<C64>> {
    if l > 12 {
        return Err(Error::ResourceBound(format!("dense Floquet operator limited to 12 sites, got {l}")));
    }
    let halves = kicked_ising_half_periods(l, p, boundary)?;
    let sequence: Vec<PlacedGate> = halves.into_iter().flatten().collect();
    dense_unitary(l, &sequence)
}
