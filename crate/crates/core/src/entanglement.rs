//! Entanglement growth from the solvable Bell-pair state.

use rand::Rng;
use serde::Serialize;

use crate::chain::{Boundary, ChainCircuit, Parity};
use crate::gates::embed1;
use crate::gates::{
    haar_su2, perfect_tensor, random_triunitary_params, seeded_rng, triunitary_gate, Euler, TriUnitaryParams,
};
use crate::tensor::{ChainState, Gate3, Mat8, QubitOp, C64};
use crate::{Error, Result};

/// `(|00> + |11>)/sqrt(2)` on the pairs `(x - 2, x)`, `x = 0 mod 4`, and `|0>`
/// on every other site. On an open chain, pair members without a partner are
/// left in `|0>`.
#[derive(Clone, Debug)]
pub struct SolvableState {
    pub state: ChainState,
    pub pairs: Vec<(usize, usize)>,
    pub product_sites: Vec<usize>,
}

pub fn solvable_state(l: usize, boundary: Boundary) -> Result<SolvableState> {
    if l < 4 {
        return Err(Error::InvalidParameter(format!("solvable state needs L >= 4, got {l}")));
    }
    if boundary == Boundary::Periodic && !l.is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!("periodic solvable state needs L = 0 mod 4, got {l}")));
    }
    let mut pairs = Vec::new();
    for x in (0..l).step_by(4) {
        match boundary {
            Boundary::Periodic => pairs.push(((x + l - 2) % l, x)),
            Boundary::Open if x >= 2 => pairs.push((x - 2, x)),
            Boundary::Open => {}
        }
    }
    let paired: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let product_sites: Vec<usize> = (0..l).filter(|s| !paired.contains(s)).collect();

    let mut amps = vec![C64::new(0.0, 0.0); 1 << l];
    let amp = C64::new(0.5f64.powf(pairs.len() as f64 / 2.0), 0.0);
    for mask in 0..1usize << pairs.len() {
        let idx = pairs.iter().enumerate().fold(0usize, |acc, (k, &(a, b))| {
            if (mask >> k) & 1 == 1 {
                acc | (1 << (l - 1 - a)) | (1 << (l - 1 - b))
            } else {
                acc
            }
        });
        amps[idx] = amp;
    }
    Ok(SolvableState { state: ChainState::from_amplitudes(amps)?, pairs, product_sites })
}

impl SolvableState {
    /// Bell pairs with exactly one member inside `region`.
    pub fn straddling_pairs(&self, region: &[usize]) -> usize {
        self.pairs.iter().filter(|(a, b)| region.contains(a) != region.contains(b)).count()
    }
}

fn check_region(n: usize, region: &[usize]) -> Result<()> {
    if region.is_empty() || region.len() >= n {
        return Err(Error::InvalidRegion(format!("region of {} sites in a chain of {n}", region.len())));
    }
    if let Some(&s) = region.iter().find(|&&s| s >= n) {
        return Err(Error::SiteOutOfRange { site: s, n });
    }
    Ok(())
}

/// Eigenvalues of the reduced state on `region` (computed on the smaller
/// side), descending.
pub fn schmidt_spectrum(state: &ChainState, region: &[usize]) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    check_region(n, region)?;
    let complement: Vec<usize> = (0..n).filter(|s| !region.contains(s)).collect();
    let small = if region.len() <= complement.len() { region } else { &complement[..] };
    if small.len() > 14 {
        return Err(Error::ResourceBound(format!("reduced state on {} qubits", small.len())));
    }
    let rest: Vec<usize> = (0..n).filter(|s| !small.contains(s)).collect();
    let mut m = faer::Mat::<C64>::zeros(1 << small.len(), 1 << rest.len());
    for (idx, &amp) in state.amplitudes().iter().enumerate() {
        let bits = |sites: &[usize]| sites.iter().fold(0, |acc, &s| (acc << 1) | ((idx >> (n - 1 - s)) & 1));
        m[(bits(small), bits(&rest))] = amp;
    }
    let rho = &m * m.adjoint();
    let mut ev: Vec<f64> = rho
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::InvalidParameter(format!("eigensolver failed: {e:?}")))?
        .into_iter()
        .map(|x| x.max(0.0))
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Renyi entropy `S_n = log2(sum p^n) / (1 - n)` in bits; `n = 1` is von
/// Neumann.
pub fn entropy_from_spectrum(p: &[f64], n: f64) -> f64 {
    let s = if (n - 1.0).abs() < 1e-12 {
        -p.iter().filter(|&&x| x > 1e-300).map(|&x| x * x.log2()).sum::<f64>()
    } else {
        p.iter().map(|&x| x.powf(n)).sum::<f64>().log2() / (1.0 - n)
    };
    s.max(0.0)
}

pub fn entropy(state: &ChainState, region: &[usize], n: f64) -> Result<f64> {
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidParameter(format!("Renyi index {n} not supported")));
    }
    Ok(entropy_from_spectrum(&schmidt_spectrum(state, region)?, n))
}

/// Eigenvalues below this count as zero in the flatness residual.
pub const RANK_CUTOFF: f64 = 1e-10;

/// `max |lambda rank - 1|` over the retained eigenvalues plus the discarded
/// weight. Zero iff the spectrum is flat, i.e. `rho = P / rank`.
pub fn flatness_from_spectrum(p: &[f64]) -> f64 {
    let kept: Vec<f64> = p.iter().copied().filter(|&x| x > RANK_CUTOFF).collect();
    let dropped: f64 = p.iter().copied().filter(|&x| x <= RANK_CUTOFF).sum();
    let rank = kept.len() as f64;
    kept.iter().map(|&x| (x * rank - 1.0).abs()).fold(0.0, f64::max) + dropped
}

pub fn spectrum_flatness(state: &ChainState, region: &[usize]) -> Result<f64> {
    Ok(flatness_from_spectrum(&schmidt_spectrum(state, region)?))
}

/// Mean entanglement of a random pure state, `l - 2^{2l - L - 1} / ln 2` bits.
pub fn page_value(l: usize, total: usize) -> Result<f64> {
    if 2 * l > total {
        return Err(Error::InvalidParameter(format!("Page value needs 2l <= L, got l = {l}, L = {total}")));
    }
    Ok(l as f64 - 2f64.powi(2 * l as i32 - total as i32 - 1) / std::f64::consts::LN_2)
}

/// Where each gate of a growth experiment comes from.
#[derive(Clone, Debug)]
pub enum GateSource {
    /// The same gate everywhere.
    Fixed(Box<Gate3>),
    /// One random tri-unitary gate per seed, used everywhere.
    RandomFloquet,
    /// `phi_i` skeleton with fresh Haar single-qubit gates on every gate in
    /// spacetime.
    DressedCp { phi: [f64; 3] },
    /// Perfect tensor with fresh Haar single-qubit gates on all six legs.
    DressedPerfect,
}

fn layer(ops: &[QubitOp; 3]) -> Mat8 {
    embed1(&ops[0], 0) * embed1(&ops[1], 1) * embed1(&ops[2], 2)
}

fn haar_euler<R: Rng + ?Sized>(rng: &mut R) -> Euler {
    Euler::from_op(&haar_su2(rng)).expect("Haar samples are unitary")
}

impl GateSource {
    fn floquet_gate(&self, seed: u64) -> Result<Option<Gate3>> {
        match self {
            GateSource::Fixed(g) => Ok(Some(g.as_ref().clone())),
            GateSource::RandomFloquet => Ok(Some(triunitary_gate(&random_triunitary_params(&mut seeded_rng(seed)))?)),
            _ => Ok(None),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Gate3> {
        match self {
            GateSource::DressedCp { phi } => {
                // the middle dressing stays trivial so every draw is tri-unitary
                let mut p = TriUnitaryParams::bare(*phi);
                let [v1, _, v3] = &mut p.v;
                for e in p.u.iter_mut().chain([v1, v3]).chain(p.w.iter_mut()) {
                    *e = haar_euler(rng);
                }
                triunitary_gate(&p)
            }
            GateSource::DressedPerfect => {
                let outs: [_; 3] = std::array::from_fn(|_| haar_su2(rng));
                let ins: [_; 3] = std::array::from_fn(|_| haar_su2(rng));
                let m = layer(&outs) * perfect_tensor().matrix() * layer(&ins);
                Gate3::from_matrix(m)
            }
            _ => unreachable!("fixed sources are handled by floquet_gate"),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GateSource::Fixed(_) => "fixed".into(),
            GateSource::RandomFloquet => "random-floquet".into(),
            GateSource::DressedCp { phi } => format!("dressed-cp({},{},{})", phi[0], phi[1], phi[2]),
            GateSource::DressedPerfect => "dressed-perfect".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyPoint {
    pub t: usize,
    pub s2: f64,
    pub s3: f64,
    pub svn: f64,
    pub flatness: f64,
    /// Whether the final half-layer has a gate straddling a boundary of the
    /// region.
    pub last_layer_straddles: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropySeries {
    pub seed: u64,
    pub region: Vec<usize>,
    pub points: Vec<EntropyPoint>,
}

/// Number of gates of a half-layer acting on both sides of `region`.
pub fn straddling_gates(c: &ChainCircuit, parity: Parity, region: &[usize]) -> usize {
    c.half_layer(parity)
        .iter()
        .filter(|(s, _)| {
            let inside = s.iter().filter(|x| region.contains(x)).count();
            inside > 0 && inside < 3
        })
        .count()
}

/// Evolves the solvable state for `t_max` half-layers and records entropies
/// after every half-layer.
pub fn growth_experiment(
    source: &GateSource,
    l: usize,
    boundary: Boundary,
    region: &[usize],
    t_max: usize,
    seed: u64,
) -> Result<EntropySeries> {
    if l > 22 {
        return Err(Error::ResourceBound(format!("growth experiments limited to L <= 22, got {l}")));
    }
    check_region(l, region)?;
    let mut psi = solvable_state(l, boundary)?.state;
    let fixed = source.floquet_gate(seed)?;
    let layout = ChainCircuit::uniform(l, boundary, Gate3::swap13())?;
    let circuit = match &fixed {
        Some(g) => ChainCircuit::uniform(l, boundary, g.clone())?,
        None => layout.clone(),
    };
    let mut rng = seeded_rng(seed);
    let mut points = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let parity = Parity::of_step(t);
        if fixed.is_some() {
            circuit.apply_half_layer(&mut psi, parity)?;
        } else {
            for (sites, _) in layout.half_layer(parity) {
                psi.apply(&source.draw(&mut rng)?, &sites)?;
            }
        }
        let p = schmidt_spectrum(&psi, region)?;
        points.push(EntropyPoint {
            t,
            s2: entropy_from_spectrum(&p, 2.0),
            s3: entropy_from_spectrum(&p, 3.0),
            svn: entropy_from_spectrum(&p, 1.0),
            flatness: flatness_from_spectrum(&p),
            last_layer_straddles: straddling_gates(&layout, parity, region) > 0,
        });
    }
    Ok(EntropySeries { seed, region: region.to_vec(), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn solvable_layout() {
        let s = solvable_state(8, Boundary::Periodic).unwrap();
        assert_eq!(s.pairs, vec![(6, 0), (2, 4)]);
        assert_eq!(s.product_sites, vec![1, 3, 5, 7]);
        assert!((s.state.norm() - 1.0).abs() < 1e-14);
        let rho = s.state.reduced_density_matrix(&[2]).unwrap();
        assert!((rho - DMatrix::identity(2, 2) * C64::new(0.5, 0.0)).norm() < 1e-14);
        // cut through the pair (2, 4) vs between pairs
        assert!((entropy(&s.state, &[0, 1, 2, 3], 2.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((entropy(&s.state, &[1, 2, 3, 4], 2.0).unwrap()).abs() < 1e-12);
        assert_eq!(s.straddling_pairs(&[0, 1, 2, 3]), 2);

        let open = solvable_state(19, Boundary::Open).unwrap();
        assert_eq!(open.pairs, vec![(2, 4), (6, 8), (10, 12), (14, 16)]);
        assert!(open.product_sites.contains(&0) && open.product_sites.contains(&18));
    }

    #[test]
    fn entropy_basics() {
        let product = ChainState::zeros(4).unwrap();
        assert_eq!(entropy(&product, &[0, 1], 1.0).unwrap(), 0.0);
        assert_eq!(spectrum_flatness(&product, &[0]).unwrap(), 0.0);
        assert!(entropy(&product, &[], 1.0).is_err());
        assert!(entropy(&product, &[0, 1, 2, 3], 1.0).is_err());
        let two_pairs = solvable_state(8, Boundary::Periodic).unwrap().state;
        for n in [1.0, 2.0, 3.0] {
            // region {0, 4}: one member of each pair
            assert!((entropy(&two_pairs, &[0, 4], n).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn page_values() {
        assert!((page_value(13, 27).unwrap() - (13.0 - 0.25 / std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((page_value(1, 2).unwrap() - 0.2786525).abs() < 1e-6);
        assert!((page_value(7, 14).unwrap() - 6.2786525).abs() < 1e-6);
        assert!(page_value(8, 14).is_err());
    }
}
