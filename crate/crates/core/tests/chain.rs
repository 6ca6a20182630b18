use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use triunitary::chain::*;
use triunitary::channel::Direction;
use triunitary::gates::*;
use triunitary::tensor::{ChainState, LocalOperator};
use triunitary::{Error, Gate3, Pauli, QubitOp, C64};

fn random_gate(seed: u64) -> Gate3 {
    triunitary_gate(&random_triunitary_params(&mut seeded_rng(seed))).unwrap()
}

fn haar_gate(seed: u64) -> Gate3 {
    Gate3::from_dmatrix(&haar_unitary(&mut seeded_rng(seed), 8)).unwrap()
}

fn random_state(n: usize, seed: u64) -> ChainState {
    haar_state(&mut seeded_rng(seed), n).unwrap()
}

fn traceless_paulis() -> Vec<QubitOp> {
    Pauli::TRACELESS.iter().map(|p| p.op()).collect()
}

fn dense_site_op(l: usize, site: usize, a: &QubitOp) -> DMatrix<C64> {
    LocalOperator::single(site, a).reduce(&(0..l).collect::<Vec<_>>()).unwrap().matrix()
}

#[test]
fn two_half_layers_compose_to_one_period() {
    let c = ChainCircuit::uniform(8, Boundary::Periodic, random_gate(1)).unwrap();
    let ue = c.half_layer_dense(Parity::Even).unwrap();
    let uo = c.half_layer_dense(Parity::Odd).unwrap();
    let layers = c.layers();
    let full: Vec<PlacedGate> = layers.iter().flatten().cloned().collect();
    let direct = dense_unitary(8, &full).unwrap();
    assert!((uo * ue - direct).norm() < 1e-10);
    let mut psi = random_state(8, 3);
    let start = psi.clone();
    c.apply_half_layer(&mut psi, Parity::Odd).unwrap();
    c.apply_half_layer_dagger(&mut psi, Parity::Odd).unwrap();
    assert!((psi.inner(&start).norm() - 1.0).abs() < 1e-10);
}

#[test]
fn norm_is_preserved_over_twenty_half_layers() {
    let c = ChainCircuit::uniform(12, Boundary::Periodic, random_gate(2)).unwrap();
    let mut psi = random_state(12, 4);
    c.evolve(&mut psi, 20).unwrap();
    assert!((psi.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn idle_sites_per_half_layer() {
    let c = ChainCircuit::uniform(16, Boundary::Periodic, Gate3::swap13()).unwrap();
    for p in [Parity::Even, Parity::Odd] {
        assert_eq!(c.idle_sites(p).len(), 4);
    }
}

#[test]
fn local_support_evolution_matches_dense_conjugation() {
    let l = 8;
    let c = ChainCircuit::uniform(l, Boundary::Periodic, random_gate(5)).unwrap();
    let layers = c.layers();
    let z = QubitOp::z();
    let x = QubitOp::x();
    for t in 1..=3 {
        let seq: Vec<PlacedGate> = (1..=t).flat_map(|k| layers[(k - 1) % 2].clone()).collect();
        let u = dense_unitary(l, &seq).unwrap();
        for anchor in 0..4 {
            let dense = u.adjoint() * dense_site_op(l, anchor, &z) * &u;
            for y in 0..l {
                let b = dense_site_op(l, y, &x);
                let expect = (dense.clone() * b).trace() / (1u64 << l) as f64;
                let x_off = y as i64 - anchor as i64;
                let v = c.heisenberg_correlator(&z, &x, anchor, x_off, t, true).unwrap();
                assert!((v - expect).norm() < 1e-12, "anchor {anchor} y {y} t {t}");
            }
        }
    }
}

#[test]
fn ten_random_gates_confine_to_three_rays() {
    for seed in 0..10 {
        let c = ChainCircuit::uniform(12, Boundary::Periodic, random_gate(100 + seed)).unwrap();
        for anchor in 0..4 {
            for a in &traceless_paulis() {
                let grid = c.correlation_grid(a, &Pauli::Z.op(), anchor, 2).unwrap();
                assert!(grid.max_off_ray() < 1e-10, "seed {seed} anchor {anchor}: {}", grid.max_off_ray());
            }
        }
    }
}

#[test]
fn generic_unitary_leaks_off_ray() {
    let c = ChainCircuit::uniform(12, Boundary::Periodic, haar_gate(1)).unwrap();
    let worst = (0..4)
        .map(|anchor| c.correlation_grid(&Pauli::Z.op(), &Pauli::Z.op(), anchor, 2).unwrap().max_off_ray())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
}

#[test]
fn off_ray_point_inside_the_cone_vanishes() {
    let c = ChainCircuit::uniform(12, Boundary::Periodic, random_gate(8)).unwrap();
    for anchor in 0..4 {
        let v = c.heisenberg_correlator(&Pauli::Y.op(), &Pauli::X.op(), anchor, 2, 2, false).unwrap();
        assert!(v.norm() < 1e-10);
    }
}

#[test]
fn causality_for_any_gate() {
    let c = ChainCircuit::uniform(16, Boundary::Periodic, haar_gate(2)).unwrap();
    for anchor in 0..4 {
        for t in 1..=3 {
            for x in [2 * t as i64 + 1, 2 * t as i64 + 2, -(2 * t as i64) - 1] {
                let v = c.heisenberg_correlator(&Pauli::Z.op(), &Pauli::Z.op(), anchor, x, t, false).unwrap();
                assert!(v.norm() < 1e-10);
            }
        }
    }
}

#[test]
fn perfect_tensor_grid_vanishes() {
    let c = ChainCircuit::uniform(12, Boundary::Periodic, perfect_tensor()).unwrap();
    let idle = c.idle_sites(Parity::Even);
    for anchor in 0..4 {
        for a in &traceless_paulis() {
            let g = c.correlation_grid(a, a, anchor, 2).unwrap();
            for e in &g.entries {
                // a site idle in the first half-layer keeps its operator until t = 2
                let untouched = e.t == 1 && e.x == 0 && idle.contains(&anchor);
                let expect = if untouched { 1.0 } else { 0.0 };
                assert!((e.value.norm() - expect).abs() < 1e-10, "anchor {anchor} x {} t {}", e.x, e.t);
            }
        }
    }
}

#[test]
fn rays_follow_channel_iteration() {
    for seed in 0..5 {
        let c = ChainCircuit::uniform(12, Boundary::Periodic, random_gate(200 + seed)).unwrap();
        for anchor in 0..4 {
            for a in &traceless_paulis() {
                for b in &traceless_paulis() {
                    let report = c.ray_channel_match(a, b, anchor, 2).unwrap();
                    assert!(report.worst() < 1e-9, "seed {seed} anchor {anchor}: {}", report.worst());
                }
            }
        }
    }
}

#[test]
fn ray_data_is_not_trivial() {
    let c = ChainCircuit::uniform(12, Boundary::Periodic, random_gate(200)).unwrap();
    let z = Pauli::Z.op();
    let report = c.ray_channel_match(&z, &z, 0, 2).unwrap();
    assert!(report.checks.iter().any(|k| k.brute.norm() > 1e-2));
}

#[test]
fn appendix_case_two_z_is_conserved_on_the_static_ray() {
    let c = ChainCircuit::uniform(16, Boundary::Periodic, appendix_gate(FRAC_PI_2, 0.0)).unwrap();
    let z = Pauli::Z.op();
    for t in 1..=3 {
        let v = c.heisenberg_correlator(&z, &z, 1, 0, t, false).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-10);
        assert_eq!(c.ray_for(1, t).direction, Direction::Zero);
    }
}

#[test]
fn appendix_case_three_z_alternates() {
    let c = ChainCircuit::uniform(16, Boundary::Periodic, appendix_gate(FRAC_PI_2, FRAC_PI_2)).unwrap();
    let z = Pauli::Z.op();
    for t in 1..=3 {
        let ray = c.ray_for(0, t);
        let v = c.heisenberg_correlator(&z, &z, 0, ray.x, t, false).unwrap();
        assert!((v - C64::new((-1.0f64).powi(t as i32), 0.0)).norm() < 1e-10, "t {t}: {v}");
    }
}

#[test]
fn appendix_mixing_gate_x_decays_geometrically() {
    let c = ChainCircuit::uniform(16, Boundary::Periodic, appendix_gate(FRAC_PI_2, PI / 5.0)).unwrap();
    let x = Pauli::X.op();
    for t in 1..=3 {
        let ray = c.ray_for(2, t);
        let v = c.heisenberg_correlator(&x, &x, 2, ray.x, t, false).unwrap();
        assert!((v - C64::new(0.5f64.powi(t as i32), 0.0)).norm() < 1e-10, "t {t}: {v}");
    }
}

#[test]
fn mirror_exchanges_left_and_right_rays() {
    let c = ChainCircuit::uniform(16, Boundary::Periodic, random_gate(6)).unwrap();
    let m = c.mirrored().unwrap();
    let (a, b) = (Pauli::Z.op(), Pauli::Y.op());
    for anchor in 0..4 {
        let ma = m.mirror_site(anchor);
        let g = c.correlation_grid(&a, &b, anchor, 3).unwrap();
        let h = m.correlation_grid(&a, &b, ma, 3).unwrap();
        for e in &g.entries {
            let m = h.get(-e.x, e.t).unwrap();
            assert!((m - e.value).norm() < 1e-12, "anchor {anchor} x {} t {}", e.x, e.t);
        }
        let (r, s) = (c.ray_for(anchor, 3), m.ray_for(ma, 3));
        assert_eq!(r.x, -s.x);
    }
    assert!(ChainCircuit::uniform(11, Boundary::Open, Gate3::swap13()).unwrap().mirrored().is_err());
}

#[test]
fn open_chains_and_overrides() {
    let mut c = ChainCircuit::uniform(11, Boundary::Open, random_gate(1)).unwrap();
    c.set_gate(Parity::Odd, 0, random_gate(2)).unwrap();
    assert!(!c.is_uniform());
    assert!(matches!(c.ray_channel_match(&Pauli::Z.op(), &Pauli::Z.op(), 0, 1), Err(Error::InvalidParameter(_))));
    // space-dependent tri-unitary gates still confine
    let grid = c.correlation_grid(&Pauli::Z.op(), &Pauli::X.op(), 4, 2).unwrap();
    assert!(grid.max_off_ray() < 1e-10);
    assert!(grid.max_abs() > 1e-3);
}

fn kicked_ising_worst_off_ray(l: usize, p: &KickedIsingParams, boundary: Boundary, t_max: usize) -> (f64, f64) {
    let layers = kicked_ising_half_periods(l, p, boundary).unwrap();
    let mut off: f64 = 0.0;
    let mut on: f64 = 0.0;
    for anchor in 0..4 {
        for a in &traceless_paulis() {
            for b in &traceless_paulis() {
                let g = sequence_correlation_grid(l, boundary, &layers, a, b, anchor, t_max).unwrap();
                off = off.max(g.max_off_ray());
                on = on.max(g.entries.iter().filter(|e| e.on_ray()).map(|e| e.value.norm()).fold(0.0, f64::max));
            }
        }
    }
    (off, on)
}

#[test]
fn kicked_ising_at_the_self_dual_point_is_confined() {
    let l = 10;
    let plain = KickedIsingParams::uniform(l, Boundary::Periodic, FRAC_PI_4, FRAC_PI_4, 0.0, 0.0);
    let (off, on) = kicked_ising_worst_off_ray(l, &plain, Boundary::Periodic, 2);
    assert!(off < 1e-9 && on > 1e-3, "{off} {on}");

    let mut generic = KickedIsingParams::uniform(l, Boundary::Periodic, FRAC_PI_4, FRAC_PI_4, 0.0, 0.0);
    generic.b_prime = (0..l / 2).map(|k| 0.3 + 0.17 * k as f64).collect();
    generic.j_prime = (0..l).map(|k| 0.7 - 0.09 * k as f64).collect();
    generic.h = Some((0..l).map(|k| 0.05 * k as f64 - 0.2).collect());
    let (off, on) = kicked_ising_worst_off_ray(l, &generic, Boundary::Periodic, 2);
    assert!(off < 1e-9 && on > 1e-3, "{off} {on}");

    let open = KickedIsingParams::uniform(8, Boundary::Open, -FRAC_PI_4, FRAC_PI_4, 0.4, 0.6);
    let (off, _) = kicked_ising_worst_off_ray(8, &open, Boundary::Open, 2);
    assert!(off < 1e-9);
}

#[test]
fn kicked_ising_away_from_the_point_leaks() {
    let p = KickedIsingParams::uniform(10, Boundary::Periodic, 0.5, FRAC_PI_4, 0.3, 0.7);
    let (off, _) = kicked_ising_worst_off_ray(10, &p, Boundary::Periodic, 2);
    assert!(off > 1e-3);
}
