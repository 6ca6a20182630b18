use nalgebra::DMatrix;

use super::kernel::{apply_matrix, check_sites};
use super::{Gate2, Gate3, QubitOp, C64, ONE, ZERO};
use crate::{Error, Result};

/// Anything that acts as a `2^k x 2^k` matrix on `k` ordered sites.
pub trait LocalUnitary {
    fn arity(&self) -> usize;
    /// Row-major entries.
    fn row_major(&self) -> Vec<C64>;

    fn dagger_row_major(&self) -> Vec<C64> {
        let d = 1usize << self.arity();
        let m = self.row_major();
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                out[c * d + r] = m[r * d + c].conj();
            }
        }
        out
    }
}

impl LocalUnitary for QubitOp {
    fn arity(&self) -> usize {
        1
    }
    fn row_major(&self) -> Vec<C64> {
        self.entries().to_vec()
    }
}

impl LocalUnitary for Gate2 {
    fn arity(&self) -> usize {
        2
    }
    fn row_major(&self) -> Vec<C64> {
        (0..16).map(|i| self.0[(i / 4, i % 4)]).collect()
    }
}

impl LocalUnitary for Gate3 {
    fn arity(&self) -> usize {
        3
    }
    fn row_major(&self) -> Vec<C64> {
        self.tensor().entries_row_major()
    }
}

impl LocalUnitary for DMatrix<C64> {
    fn arity(&self) -> usize {
        self.nrows().trailing_zeros() as usize
    }
    fn row_major(&self) -> Vec<C64> {
        self.transpose().iter().copied().collect()
    }
}

/// Dense state vector of `n` qubits; site 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainState {
    n: usize,
    amps: Vec<C64>,
}

/// Largest register held as a dense vector.
pub const MAX_STATE_QUBITS: usize = 26;

impl ChainState {
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_STATE_QUBITS {
            return Err(Error::ResourceBound(format!("{n} qubits exceeds the dense limit of {MAX_STATE_QUBITS}")));
        }
        if index >> n != 0 {
            return Err(Error::InvalidParameter(format!("basis index {index} needs more than {n} qubits")));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Ok(ChainState { n, amps })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Computational basis state from bits listed site by site.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        Self::basis(bits.len(), idx)
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("{len} amplitudes is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_STATE_QUBITS {
            return Err(Error::ResourceBound(format!("{n} qubits exceeds the dense limit of {MAX_STATE_QUBITS}")));
        }
        Ok(ChainState { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &ChainState) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Applies `g` in place on `sites` (the gate's qubit 1 on `sites[0]`).
    pub fn apply<G: LocalUnitary + ?Sized>(&mut self, g: &G, sites: &[usize]) -> Result<()> {
        self.apply_entries(&g.row_major(), sites)
    }

    pub fn apply_dagger<G: LocalUnitary + ?Sized>(&mut self, g: &G, sites: &[usize]) -> Result<()> {
        self.apply_entries(&g.dagger_row_major(), sites)
    }

    pub(crate) fn apply_entries(&mut self, m: &[C64], sites: &[usize]) -> Result<()> {
        check_sites(self.n, sites)?;
        if m.len() != 1 << (2 * sites.len()) {
            return Err(Error::InvalidParameter(format!(
                "gate of {} entries does not act on {} sites",
                m.len(),
                sites.len()
            )));
        }
        apply_matrix(&mut self.amps, self.n, sites, m);
        Ok(())
    }

    /// Consuming form of [`ChainState::apply`].
    pub fn apply_gate<G: LocalUnitary + ?Sized>(mut self, g: &G, sites: &[usize]) -> Result<Self> {
        self.apply(g, sites)?;
        Ok(self)
    }

    /// Coefficient matrix `psi[a, b]` with `a` indexing `region` (in the order
    /// given) and `b` the complement in ascending order.
    pub fn bipartition_matrix(&self, region: &[usize]) -> Result<DMatrix<C64>> {
        check_sites(self.n, region)?;
        let rest: Vec<usize> = (0..self.n).filter(|s| !region.contains(s)).collect();
        let (ka, kb) = (region.len(), rest.len());
        let mut m = DMatrix::zeros(1 << ka, 1 << kb);
        for (idx, amp) in self.amps.iter().enumerate() {
            let bit = |s: usize| (idx >> (self.n - 1 - s)) & 1;
            let a = region.iter().fold(0, |acc, &s| (acc << 1) | bit(s));
            let b = rest.iter().fold(0, |acc, &s| (acc << 1) | bit(s));
            m[(a, b)] = *amp;
        }
        Ok(m)
    }

    /// Reduced density matrix on `region`, in the listed site order.
    pub fn reduced_density_matrix(&self, region: &[usize]) -> Result<DMatrix<C64>> {
        if region.len() > 14 {
            return Err(Error::ResourceBound(format!("reduced state on {} qubits", region.len())));
        }
        let m = self.bipartition_matrix(region)?;
        Ok(&m * m.adjoint())
    }

    /// `<psi| P |psi>` for a single-site operator.
    pub fn expectation(&self, op: &QubitOp, site: usize) -> Result<C64> {
        let mut phi = self.clone();
        phi.apply(op, &[site])?;
        Ok(self.inner(&phi))
    }
}
