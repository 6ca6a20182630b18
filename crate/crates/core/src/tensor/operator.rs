use nalgebra::DMatrix;

use super::kernel::{apply_matrix, partial_trace_slice};
use super::state::LocalUnitary;
use super::{QubitOp, C64, ONE, ZERO};
use crate::{Error, Result};

/// Largest support a [`LocalOperator`] may grow to (`4^k` amplitudes).
pub const MAX_SUPPORT: usize = 12;

/// An operator on a many-qubit register stored only on its support: the
/// full operator is `O_S (x) 1` on the remaining sites.
///
/// Conjugating by a gate that does not touch the support is the identity, so
/// exact Heisenberg evolution only ever visits gates inside the light cone.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    sites: Vec<usize>,
    /// Row-major `2^k x 2^k`, `sites[0]` the most significant bit.
    data: Vec<C64>,
}

impl LocalOperator {
    pub fn identity() -> Self {
        LocalOperator { sites: Vec::new(), data: vec![ONE] }
    }

    pub fn single(site: usize, op: &QubitOp) -> Self {
        LocalOperator { sites: vec![site], data: op.entries().to_vec() }
    }

    pub fn from_matrix(sites: Vec<usize>, m: &DMatrix<C64>) -> Result<Self> {
        super::kernel::check_sites(usize::MAX, &sites)?;
        let d = 1usize << sites.len();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::InvalidParameter(format!("expected a {d}x{d} matrix")));
        }
        Ok(LocalOperator { sites, data: m.transpose().iter().copied().collect() })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        let d = 1usize << self.sites.len();
        DMatrix::from_row_slice(d, d, &self.data)
    }

    /// Enlarges the support by tensoring with identities on new sites.
    pub fn extend(&mut self, sites: &[usize]) -> Result<()> {
        let new: Vec<usize> = sites.iter().copied().filter(|s| !self.sites.contains(s)).collect();
        if new.is_empty() {
            return Ok(());
        }
        let k = self.sites.len();
        let m = new.len();
        if k + m > MAX_SUPPORT {
            return Err(Error::ResourceBound(format!("operator support of {} sites exceeds {MAX_SUPPORT}", k + m)));
        }
        let (d_old, d_new) = (1usize << k, 1usize << m);
        let d = d_old * d_new;
        let mut data = vec![ZERO; d * d];
        for r in 0..d_old {
            for c in 0..d_old {
                let v = self.data[r * d_old + c];
                if v == ZERO {
                    continue;
                }
                for j in 0..d_new {
                    data[((r << m) | j) * d + ((c << m) | j)] = v;
                }
            }
        }
        self.sites.extend(new);
        self.data = data;
        Ok(())
    }

    fn positions(&self, sites: &[usize]) -> Vec<usize> {
        sites.iter().map(|s| self.sites.iter().position(|t| t == s).expect("site in support")).collect()
    }

    fn conjugate_with(&mut self, row: &[C64], col: &[C64], sites: &[usize]) -> Result<()> {
        super::kernel::check_sites(usize::MAX, sites)?;
        self.extend(sites)?;
        let k = self.sites.len();
        let pos = self.positions(sites);
        let col_pos: Vec<usize> = pos.iter().map(|p| p + k).collect();
        apply_matrix(&mut self.data, 2 * k, &pos, row);
        apply_matrix(&mut self.data, 2 * k, &col_pos, col);
        Ok(())
    }

    /// `O -> G^dagger O G` with the gate acting on `sites`.
    pub fn heisenberg<G: LocalUnitary + ?Sized>(&mut self, g: &G, sites: &[usize]) -> Result<()> {
        let m = g.row_major();
        let d = 1usize << g.arity();
        let transpose: Vec<C64> = (0..d * d).map(|i| m[(i % d) * d + i / d]).collect();
        self.conjugate_with(&g.dagger_row_major(), &transpose, sites)
    }

    /// `O -> G O G^dagger` with the gate acting on `sites`.
    pub fn push_forward<G: LocalUnitary + ?Sized>(&mut self, g: &G, sites: &[usize]) -> Result<()> {
        let m = g.row_major();
        let conj: Vec<C64> = m.iter().map(|z| z.conj()).collect();
        self.conjugate_with(&m, &conj, sites)
    }

    /// Normalized partial trace `2^{-|traced|} Tr_traced O`, keeping `keep` in
    /// the listed order. Sites outside the support come out as identities.
    pub fn reduce(&self, keep: &[usize]) -> Result<LocalOperator> {
        super::kernel::check_sites(usize::MAX, keep)?;
        let inside: Vec<usize> = keep.iter().copied().filter(|s| self.sites.contains(s)).collect();
        let k = self.sites.len();
        let traced = k - inside.len();
        let data = partial_trace_slice(&self.data, k, &self.positions(&inside))?;
        let scale = 0.5f64.powi(traced as i32);
        let mut out = LocalOperator { sites: inside, data: data.into_iter().map(|z| z * scale).collect() };
        out.extend(keep)?;
        // restore the requested order
        if out.sites != keep {
            let perm = out.positions(keep);
            let kk = keep.len();
            let d = 1usize << kk;
            let remap = |i: usize| (0..kk).fold(0, |acc, j| (acc << 1) | ((i >> (kk - 1 - perm[j])) & 1));
            let mut data = vec![ZERO; d * d];
            for r in 0..d {
                for c in 0..d {
                    data[remap(r) * d + remap(c)] = out.data[r * d + c];
                }
            }
            out = LocalOperator { sites: keep.to_vec(), data };
        }
        Ok(out)
    }

    /// Infinite-temperature overlap `2^{-N} Tr(O b_site)` on any register
    /// containing the support.
    pub fn correlate_single(&self, site: usize, b: &QubitOp) -> C64 {
        let k = self.sites.len();
        let d = 1usize << k;
        let norm = 0.5f64.powi(k as i32);
        match self.sites.iter().position(|&s| s == site) {
            None => {
                let tr: C64 = (0..d).map(|i| self.data[i * d + i]).sum();
                tr * b.trace() * norm * 0.5
            }
            Some(p) => {
                let shift = k - 1 - p;
                let bm = b.matrix();
                let mut acc = ZERO;
                for r in 0..d {
                    for c in 0..d {
                        if (r ^ c) & !(1 << shift) != 0 {
                            continue;
                        }
                        acc += self.data[r * d + c] * bm[((c >> shift) & 1, (r >> shift) & 1)];
                    }
                }
                acc * norm
            }
        }
    }

    /// `2^{-N} Tr(A B)` for two local operators on a common register.
    pub fn overlap(&self, other: &LocalOperator) -> Result<C64> {
        let common: Vec<usize> = self.sites.iter().copied().filter(|s| other.sites.contains(s)).collect();
        let a = self.reduce(&common)?;
        let b = other.reduce(&common)?;
        let d = 1usize << common.len();
        let mut acc = ZERO;
        for r in 0..d {
            for c in 0..d {
                acc += a.data[r * d + c] * b.data[c * d + r];
            }
        }
        Ok(acc * 0.5f64.powi(common.len() as i32))
    }

    /// Renames support sites; the map must stay injective on the support.
    pub fn relabel<F: Fn(usize) -> usize>(&mut self, f: F) -> Result<()> {
        let sites: Vec<usize> = self.sites.iter().map(|&s| f(s)).collect();
        super::kernel::check_sites(usize::MAX, &sites)?;
        self.sites = sites;
        Ok(())
    }

    /// Drops support sites on which the operator acts as the identity.
    pub fn trim(&mut self, tol: f64) -> Result<()> {
        let mut i = 0;
        while i < self.sites.len() {
            let site = self.sites[i];
            let rest: Vec<usize> = self.sites.iter().copied().filter(|&s| s != site).collect();
            let mut candidate = self.reduce(&rest)?;
            candidate.extend(&[site])?;
            let reordered = candidate.reduce(&self.sites)?;
            let diff: f64 = reordered.data.iter().zip(&self.data).map(|(a, b)| (a - b).norm_sqr()).sum();
            if diff.sqrt() < tol {
                *self = self.reduce(&rest)?;
            } else {
                i += 1;
            }
        }
        Ok(())
    }
}
