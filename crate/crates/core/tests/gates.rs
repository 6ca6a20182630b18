use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use proptest::prelude::*;
use triunitary::chain::Boundary;
use triunitary::gates::*;
use triunitary::tensor::{phase_distance, Mat8, Rotation};
use triunitary::{Error, Gate2, Gate3, Pauli, QubitOp, C64};

fn dm(m: &Mat8) -> DMatrix<C64> {
    DMatrix::from_fn(8, 8, |r, c| m[(r, c)])
}

fn diag8(f: impl Fn([f64; 3]) -> f64) -> Mat8 {
    Mat8::from_fn(|r, c| {
        if r != c {
            return C64::new(0.0, 0.0);
        }
        let z: [f64; 3] = std::array::from_fn(|k| if (r >> (2 - k)) & 1 == 0 { 1.0 } else { -1.0 });
        C64::from_polar(1.0, f(z))
    })
}

fn pair_sum(z: [f64; 3]) -> f64 {
    z[0] * z[1] + z[1] * z[2] + z[2] * z[0]
}

#[test]
fn hundred_family_draws_are_triunitary() {
    let mut rng = seeded_rng(2024);
    for _ in 0..100 {
        let g = triunitary_gate(&random_triunitary_params(&mut rng)).unwrap();
        let r = is_triunitary(g.tensor());
        assert!(r.tri_unitary && r.residuals.iter().all(|&x| x < 1e-9), "{:?}", r.residuals);
    }
}

#[test]
fn hundred_haar_unitaries_are_not() {
    let mut rng = seeded_rng(7);
    for _ in 0..100 {
        let g = Gate3::from_dmatrix(&haar_unitary(&mut rng, 8)).unwrap();
        assert!(!is_triunitary(g.tensor()).tri_unitary);
    }
}

#[test]
fn perfect_implies_triunitary_and_perturbations_break_both() {
    let p = perfect_tensor();
    assert!(is_perfect(p.tensor()) && is_triunitary(p.tensor()).tri_unitary);
    assert_eq!(perfect_bipartitions().len(), 10);
    let mut rng = seeded_rng(3);
    for k in 0..10 {
        let h = haar_unitary(&mut rng, 8);
        let eps = 1e-3 * (k + 1) as f64;
        // exp(i eps H) for a Hermitian H close to the identity
        let herm = (&h + h.adjoint()) * C64::new(0.5, 0.0);
        let kick = (herm * C64::new(0.0, eps)).exp();
        let g = Gate3::from_dmatrix(&(dm(p.matrix()) * kick)).unwrap();
        let perfect = is_perfect(g.tensor());
        let tri = is_triunitary(g.tensor()).tri_unitary;
        assert!(!perfect || tri);
        assert!(!tri);
    }
}

#[test]
fn appendix_gate_matches_family_member() {
    for i in 0..5 {
        for j in 0..5 {
            let (phi, g) = (-PI + 1.3 * i as f64, -1.0 + 0.6 * j as f64);
            let a = appendix_gate(phi, g);
            let f = triunitary_gate(&appendix_params(phi, g)).unwrap();
            assert!(phase_distance(&a.to_dmatrix(), &f.to_dmatrix()) < 1e-10, "({phi}, {g})");
            assert!(is_triunitary(a.tensor()).tri_unitary);
        }
    }
}

#[test]
fn appendix_gate_special_lines() {
    let swap = Gate3::swap13().to_dmatrix();
    assert!(phase_distance(&appendix_gate(0.0, 0.0).to_dmatrix(), &swap) < 1e-12);
    for phi in [0.3, 1.1, FRAC_PI_2, 2.9] {
        let zz = swap.clone() * dm(&diag8(|z| -phi / 4.0 * pair_sum(z)));
        assert!(phase_distance(&appendix_gate(phi, 0.0).to_dmatrix(), &zz) < 1e-12);
        // Z_tot^2 = 3 + 2 (Z1Z2 + Z2Z3 + Z3Z1)
        let ztot = diag8(|z| -phi / 8.0 * (z[0] + z[1] + z[2]).powi(2));
        let x = QubitOp::x();
        let xxx = embed1(&x, 0) * embed1(&x, 1) * embed1(&x, 2);
        let pulse = swap.clone() * dm(&(ztot * xxx));
        assert!(phase_distance(&appendix_gate(phi, FRAC_PI_2).to_dmatrix(), &pulse) < 1e-12);
    }
}

#[test]
fn zero_skeleton_is_swap_and_phi3_pi_is_dual_unitary() {
    let g = triunitary_gate(&TriUnitaryParams::bare([0.0; 3])).unwrap();
    assert!(phase_distance(&g.to_dmatrix(), &Gate3::swap13().to_dmatrix()) < 1e-14);
    let g = triunitary_gate(&TriUnitaryParams::bare([0.0, 0.0, PI])).unwrap();
    let du =
        dual_unitary_gate(PI, &QubitOp::identity(), &QubitOp::identity(), &QubitOp::identity(), &QubitOp::identity())
            .unwrap();
    assert!(du.is_dual_unitary(1e-12));
    // qubit 2 idle, SWAP.CZ on qubits 1 and 3
    let expect = Mat8::from_fn(|r, c| {
        let (o1, o2, o3) = (r >> 2, (r >> 1) & 1, r & 1);
        let (i1, i2, i3) = (c >> 2, (c >> 1) & 1, c & 1);
        if o2 != i2 {
            return C64::new(0.0, 0.0);
        }
        du.matrix()[((o1 << 1) | o3, (i1 << 1) | i3)]
    });
    assert!(phase_distance(&g.to_dmatrix(), &dm(&expect)) < 1e-14);
}

#[test]
fn parameter_count_is_31() {
    let p = random_triunitary_params(&mut seeded_rng(1));
    assert_eq!(p.to_vec().len(), 31);
    assert_eq!(TriUnitaryParams::from_slice(&p.to_vec()).unwrap(), p);
    assert!(TriUnitaryParams::from_slice(&[0.0; 30]).is_err());
}

#[test]
fn generic_middle_dressing_is_rejected() {
    let mut rng = seeded_rng(5);
    let mut p = random_triunitary_params(&mut rng);
    p.v[1] = Euler::from_op(&haar_su2(&mut rng)).unwrap();
    assert!(matches!(triunitary_gate(&p), Err(Error::NotTriUnitary(r)) if r[2] > 1e-3 && r[0] < 1e-12 && r[1] < 1e-12));
}

#[test]
fn perfect_tensor_channels_and_legs() {
    let p = perfect_tensor();
    assert!(!is_perfect(Gate3::swap13().tensor()));
    assert!(!is_perfect(Gate3::identity().tensor()));
    // bipartition (1,2,6) -> (3,4,5) of SWAP_13 is not unitary
    let m = Gate3::swap13().tensor().bipartition_map([0, 1, 5]);
    assert!((m * m.adjoint() - Mat8::identity()).norm() > 1e-3);
    let psi = ame_state();
    assert_eq!(psi.len(), 64);
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    assert!(p.unitarity_residual() < 1e-12);
}

#[test]
fn kicked_ising_identity_and_unitarity() {
    let p = KickedIsingParams::uniform(8, Boundary::Periodic, 0.0, 0.0, 0.0, 0.0);
    let u = kicked_ising_floquet(8, &p, Boundary::Periodic).unwrap();
    assert!(phase_distance(&u, &DMatrix::identity(256, 256)) < 1e-12);
    let mut p = KickedIsingParams::uniform(8, Boundary::Open, FRAC_PI_4, FRAC_PI_4, 0.4, 0.0);
    p.j_prime = (0..7).map(|k| 0.1 * k as f64).collect();
    p.h = Some((0..8).map(|k| 0.05 * k as f64).collect());
    let u = kicked_ising_floquet(8, &p, Boundary::Open).unwrap();
    assert!((u.adjoint() * &u - DMatrix::identity(256, 256)).norm() < 1e-10);
    assert!(p.is_triunitary_point(1e-12));
    assert!(kicked_ising_floquet(7, &p, Boundary::Open).is_err());
    assert!(matches!(
        kicked_ising_floquet(14, &KickedIsingParams::uniform(14, Boundary::Open, 0.1, 0.1, 0.1, 0.1), Boundary::Open),
        Err(Error::ResourceBound(_))
    ));
}

#[test]
fn haar_su2_statistics() {
    let mut rng = seeded_rng(11);
    let n = 100_000;
    let fixed = QubitOp::pauli_rotation(Pauli::Y, 0.7);
    let (mut plain, mut shifted) = (0.0, 0.0);
    for _ in 0..n {
        let u = haar_su2(&mut rng);
        assert!((u.det() - C64::new(1.0, 0.0)).norm() < 1e-12);
        plain += u.matrix()[(0, 0)].norm_sqr();
        shifted += fixed.mul(&u).matrix()[(0, 0)].norm_sqr();
    }
    assert!((plain / n as f64 - 0.5).abs() < 0.01);
    assert!((shifted / n as f64 - 0.5).abs() < 0.01);
    let a = haar_su2(&mut seeded_rng(99));
    let b = haar_su2(&mut seeded_rng(99));
    assert_eq!(a, b);
    assert!((a.dagger().mul(&a).matrix() - QubitOp::identity().matrix()).norm() < 1e-12);
}

#[test]
fn gate_files_round_trip_bit_exactly() {
    let g = triunitary_gate(&random_triunitary_params(&mut seeded_rng(8))).unwrap();
    let text = GateFile::from_gate(&g, Some("draw".into())).to_json().unwrap();
    let back = GateFile::from_json(&text).unwrap().to_gate().unwrap();
    assert_eq!(gate_hash(&back), gate_hash(&g));
}

fn angle() -> impl Strategy<Value = f64> {
    -PI..PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cp_inverse(phi in angle()) {
        let m = cp_gate(phi).matrix() * cp_gate(-phi).matrix();
        prop_assert!((m - nalgebra::Matrix4::<C64>::identity()).norm() < 1e-14);
    }

    #[test]
    fn dual_unitary_draws(seed in any::<u64>(), phi in angle()) {
        let mut rng = seeded_rng(seed);
        let ops: Vec<QubitOp> = (0..4).map(|_| haar_su2(&mut rng)).collect();
        let g: Gate2 = dual_unitary_gate(phi, &ops[0], &ops[1], &ops[2], &ops[3]).unwrap();
        prop_assert!(g.unitarity_residual() < 1e-10);
        prop_assert!(g.is_dual_unitary(1e-10));
    }

    #[test]
    fn swap_cp_is_dual_unitary(phi in angle()) {
        let i = QubitOp::identity();
        prop_assert!(dual_unitary_gate(phi, &i, &i, &i, &i).unwrap().is_dual_unitary(1e-12));
    }

    #[test]
    fn family_is_closed_under_rotation(seed in any::<u64>()) {
        let g = triunitary_gate(&random_triunitary_params(&mut seeded_rng(seed))).unwrap();
        prop_assert!(g.reshuffle(Rotation::Tilde).unitarity_residual() < 1e-9);
        prop_assert!(g.reshuffle(Rotation::Breve).unitarity_residual() < 1e-9);
    }

    #[test]
    fn any_two_generic_middle_gates_stay_triunitary(seed in any::<u64>(), trivial in 0usize..3) {
        let mut rng = seeded_rng(seed);
        let mut p = random_triunitary_params(&mut rng);
        for k in 0..3 {
            p.v[k] = if k == trivial { Euler::IDENTITY } else { Euler::from_op(&haar_su2(&mut rng)).unwrap() };
        }
        prop_assert!(triunitary_gate(&p).is_ok());
    }

    #[test]
    fn z_commuting_middle_gates_stay_triunitary(seed in any::<u64>(), a in angle(), b in angle(), c in angle()) {
        let mut p = random_triunitary_params(&mut seeded_rng(seed));
        p.v = [Euler::new(a, 0.0, 0.0), Euler::new(b, 0.0, 0.0), Euler::new(c, 0.0, 0.0)];
        prop_assert!(triunitary_gate(&p).is_ok());
    }
}
