use nalgebra::DMatrix;

use super::{C64, ZERO};
use crate::{Error, Result};

/// Bit masks of `sites` in an `n`-qubit basis index (site 0 is the MSB).
fn site_masks(n: usize, sites: &[usize]) -> Vec<usize> {
    sites.iter().map(|&s| 1usize << (n - 1 - s)).collect()
}

/// Offsets of the `2^k` sub-basis states of `sites`, ordered so that
/// `sites[0]` is the most significant bit of the local index.
fn local_offsets(masks: &[usize]) -> Vec<usize> {
    let k = masks.len();
    (0..1usize << k).map(|j| (0..k).filter(|i| (j >> (k - 1 - i)) & 1 == 1).map(|i| masks[i]).sum()).collect()
}

pub(crate) fn check_sites(n: usize, sites: &[usize]) -> Result<()> {
    for (i, &s) in sites.iter().enumerate() {
        if s >= n {
            return Err(Error::SiteOutOfRange { site: s, n });
        }
        if sites[..i].contains(&s) {
            return Err(Error::RepeatedSite(s));
        }
    }
    Ok(())
}

/// Multiplies the amplitudes of an `n`-qubit register by the row-major
/// `2^k x 2^k` matrix `m` acting on `sites` (in the order given).
///
/// Panics on out-of-range or repeated sites; callers validate first.
pub fn apply_matrix(amps: &mut [C64], n: usize, sites: &[usize], m: &[C64]) {
    let k = sites.len();
    let dim = 1usize << k;
    assert_eq!(amps.len(), 1usize << n, "register size mismatch");
    assert_eq!(m.len(), dim * dim, "gate size mismatch");
    check_sites(n, sites).expect("invalid site list");

    let masks = site_masks(n, sites);
    let all: usize = masks.iter().sum();
    let offsets = local_offsets(&masks);
    let mut buf = vec![ZERO; dim];
    for base in 0..amps.len() {
        if base & all != 0 {
            continue;
        }
        for (b, &o) in buf.iter_mut().zip(&offsets) {
            *b = amps[base + o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            let row = &m[r * dim..(r + 1) * dim];
            amps[base + o] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
        }
    }
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Partial trace of a row-major `2^n x 2^n` operator, keeping `keep` in the
/// listed order.
pub(crate) fn partial_trace_slice(op: &[C64], n: usize, keep: &[usize]) -> Result<Vec<C64>> {
    check_sites(n, keep)?;
    let full = 1usize << n;
    if op.len() != full * full {
        return Err(Error::InvalidParameter(format!("operator has {} entries, expected {}", op.len(), full * full)));
    }
    let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
    let keep_off = local_offsets(&site_masks(n, keep));
    let trace_off = local_offsets(&site_masks(n, &traced));
    let kd = keep_off.len();
    let mut out = vec![ZERO; kd * kd];
    for (r, &ro) in keep_off.iter().enumerate() {
        for (c, &co) in keep_off.iter().enumerate() {
            out[r * kd + c] = trace_off.iter().map(|&t| op[(ro + t) * full + co + t]).sum();
        }
    }
    Ok(out)
}

/// Partial trace of a dense operator on `n` qubits; the result acts on the
/// `keep` sites in the order listed.
pub fn partial_trace(op: &DMatrix<C64>, keep: &[usize]) -> Result<DMatrix<C64>> {
    let dim = op.nrows();
    if dim != op.ncols() || !dim.is_power_of_two() {
        return Err(Error::InvalidParameter("operator must be square with power-of-two dimension".into()));
    }
    let n = dim.trailing_zeros() as usize;
    if n > 14 {
        return Err(Error::ResourceBound(format!("dense partial trace limited to 14 qubits, got {n}")));
    }
    let row_major: Vec<C64> = op.transpose().iter().copied().collect();
    let out = partial_trace_slice(&row_major, n, keep)?;
    let kd = 1usize << keep.len();
    Ok(DMatrix::from_row_slice(kd, kd, &out))
}

/// Alias kept for callers that want to be explicit about the dense path.
pub fn partial_trace_dense(op: &DMatrix<C64>, keep: &[usize]) -> Result<DMatrix<C64>> {
    partial_trace(op, keep)
}
