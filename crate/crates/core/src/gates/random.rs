use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::family::{Euler, TriUnitaryParams};
use crate::error::Result;
use crate::tensor::{ChainState, QubitOp, C64};

/// The generator used by every seeded experiment in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random SU(2) element from a uniformly random unit quaternion.
pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> QubitOp {
    let mut q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= n);
    let [a, b, c, d] = q;
    QubitOp::new(Matrix2::new(C64::new(a, b), C64::new(c, d), C64::new(-c, d), C64::new(a, -b)))
}

/// Haar-random `dim x dim` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<C64> {
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random pure state of `n` qubits: a normalized complex Gaussian vector.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<ChainState> {
    let amps = (0..1usize << n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect::<Vec<_>>();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ChainState::from_amplitudes(amps.into_iter().map(|z| z / norm).collect())
}

/// Haar single-qubit dressings, uniform interaction angles and phase. The
/// middle dressing `v2` stays trivial, which keeps every draw tri-unitary.
pub fn random_triunitary_params<R: Rng + ?Sized>(rng: &mut R) -> TriUnitaryParams {
    let mut euler = || Euler::from_op(&haar_su2(rng)).expect("Haar samples are unitary");
    let u = [euler(), euler(), euler()];
    let v = [euler(), Euler::IDENTITY, euler()];
    let w = [euler(), euler(), euler()];
    let phi = std::array::from_fn(|_| rng.random_range(0.0..2.0 * PI));
    TriUnitaryParams { phi, u, v, w, global_phase: rng.random_range(0.0..2.0 * PI) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::unitarity_residual;

    #[test]
    fn su2_samples_are_special_unitary() {
        let mut rng = seeded_rng(7);
        for _ in 0..100 {
            let u = haar_su2(&mut rng);
            assert!(u.unitarity_residual() < 1e-12);
            assert!((u.det() - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn su2_first_moment() {
        let mut rng = seeded_rng(11);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| haar_su2(&mut rng).matrix()[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        let a = haar_su2(&mut seeded_rng(3));
        let b = haar_su2(&mut seeded_rng(3));
        assert_eq!(a, b);
        let ua = haar_unitary(&mut seeded_rng(4), 8);
        assert_eq!(ua, haar_unitary(&mut seeded_rng(4), 8));
        assert!(unitarity_residual(&ua) < 1e-12);
    }
}
