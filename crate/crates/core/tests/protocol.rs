use std::f64::consts::{FRAC_PI_2, PI};

use ghznet::dense::{fidelity_frobenius, Axis, GlobalPhase, StateVector};
use ghznet::hamiltonians::{ideal, perturbed_n3, ZzScaling};
use ghznet::protocol::{branch_phase, compile, execute, ghz_target, remove_phase, verify, Engine, Rotation};
use ghznet::symmetric::{binomial, embed, project, WBasisState};
use ghznet::{Error, C64};

fn i_pow(k: i64) -> C64 {
    [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][k.rem_euclid(4) as usize]
}

#[test]
fn ideal_protocol_is_exact_for_every_register() {
    for n in 2..=12 {
        for (g, gz) in [(1.0, 0.0), (1.0, 0.05), (1.0, -0.05), (0.0, 1.0), (0.5, 1.0), (-0.3, 0.4)] {
            let v = verify(n, g, gz, Engine::Dense).unwrap();
            assert!(v.fidelity >= 1.0 - 1e-10, "n = {n}, ({g}, {gz}): F = {}", v.fidelity);
            assert!(v.phase_error() <= 1e-8, "n = {n}, ({g}, {gz}): {} vs {}", v.measured_phase, v.expected_phase);
        }
    }
}

#[test]
fn even_registers_with_weak_exchange_need_the_correction() {
    for n in (2..=10).step_by(2) {
        for (g, gz) in [(0.0, 1.0), (0.5, 1.0)] {
            let mut plan = compile(n, g, gz).unwrap();
            let graph = ideal(n, g, gz).unwrap();
            let corrected = execute(&plan, &graph, Engine::Dense).unwrap();
            assert!((branch_phase(&corrected).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-10, "n = {n}");
            plan.finals.truncate(2);
            let bare = execute(&plan, &graph, Engine::Dense).unwrap();
            assert!((branch_phase(&bare).unwrap() + C64::new(1.0, 0.0)).norm() < 1e-10, "n = {n}");
        }
    }
}

#[test]
fn engines_agree_on_ideal_graphs() {
    for n in 2..=10 {
        for (g, gz) in [(1.0, 0.0), (0.7, 0.2), (0.2, 0.9)] {
            let plan = compile(n, g, gz).unwrap();
            let graph = ideal(n, g, gz).unwrap();
            let a = execute(&plan, &graph, Engine::Dense).unwrap();
            let b = execute(&plan, &graph, Engine::Symmetric).unwrap();
            assert!(a.distance(&b).unwrap() < 1e-10, "n = {n}");
        }
    }
}

#[test]
fn symmetric_verification_beyond_dense_reach() {
    for n in [15, 16, 21, 101, 1000] {
        let v = verify(n, 1.0, 0.05, Engine::Symmetric).unwrap();
        assert!(v.fidelity >= 1.0 - 1e-9 && v.phase_error() < 1e-8, "n = {n}");
    }
    for n in 2..=10 {
        for (g, gz) in [(1.0, 0.0), (0.0, 1.0)] {
            let a = verify(n, g, gz, Engine::Symmetric).unwrap();
            let b = verify(n, g, gz, Engine::Dense).unwrap();
            assert!((a.fidelity - b.fidelity).abs() < 1e-10 && a.measured_phase.distance(&b.measured_phase) < 1e-10);
        }
    }
}

#[test]
fn ghz_targets() {
    let bell = ghz_target(2).unwrap();
    let expect = StateVector::new(2, vec![C64::new(0.5f64.sqrt(), 0.0), C64::default(), C64::default(), C64::new(0.5f64.sqrt(), 0.0)]).unwrap();
    assert_eq!(bell.state, expect);
    for n in 2..=8 {
        let (w, r) = project(&ghz_target(n).unwrap().state);
        assert!(w.distance(&WBasisState::ghz(n).unwrap()).unwrap() < 1e-15 && r < 1e-15);
    }
}

#[test]
fn odd_final_rotation_expansion() {
    // R2^{-1}|GHZ⟩ has W coefficients i^j [1 + (-1)^j i^N] √C(N,j) / (√2 2^{N/2})
    for n in (3..=9).step_by(2) {
        let mut psi = ghz_target(n).unwrap().state;
        psi.rotate_all(Axis::X, -FRAC_PI_2);
        let (w, r) = project(&psi);
        assert!(r < 1e-12);
        for j in 0..=n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let c = i_pow(j as i64) * (C64::new(1.0, 0.0) + i_pow(n as i64) * sign) * binomial(n, j).sqrt()
                / (2f64.sqrt() * 2f64.powf(n as f64 / 2.0));
            assert!((w.coeffs()[j] - c).norm() < 1e-12, "n = {n}, j = {j}");
        }
    }
}

#[test]
fn even_final_rotation_expansion() {
    // R1^{-1} R3^{-1}|GHZ⟩ has W coefficients [(-1)^j + e^{-iθ}] √C(N,j) / (√2 2^{N/2})
    for n in (2..=8).step_by(2) {
        let theta = ghznet::protocol::theta(n).unwrap();
        let mut psi = ghz_target(n).unwrap().state;
        psi.rotate(1, Axis::Z, -theta).unwrap();
        psi.rotate_all(Axis::Y, -FRAC_PI_2);
        let (w, r) = project(&psi);
        assert!(r < 1e-12);
        // the qubit-1 z rotation contributes e^{iθ/2} to |0…0⟩ and e^{-iθ/2} to |1…1⟩
        let shift = C64::from_polar(1.0, -theta / 2.0);
        for j in 0..=n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let c = (C64::new(sign, 0.0) + C64::from_polar(1.0, -theta)) * binomial(n, j).sqrt()
                / (2f64.sqrt() * 2f64.powf(n as f64 / 2.0));
            assert!((w.coeffs()[j] * shift - c).norm() < 1e-12, "n = {n}, j = {j}");
        }
    }
}

#[test]
fn phase_identities() {
    for n in 2..=14usize {
        for j in 0..=n {
            let k = (j * (n - j)) as i64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            if n % 2 == 1 {
                let lead = GlobalPhase::from_angle(if ((n - 3) / 2) % 2 == 0 { PI / 4.0 } else { -PI / 4.0 });
                let rhs = lead.value() * i_pow(j as i64) * (C64::new(1.0, 0.0) + i_pow(n as i64) * sign) / 2f64.sqrt();
                assert!((i_pow(k) - rhs).norm() < 1e-12, "odd n = {n}, j = {j}");
            } else {
                let theta = ghznet::protocol::theta(n).unwrap();
                let rhs = C64::from_polar(1.0, PI * (n as f64 / 2.0 - 1.0) + theta / 2.0)
                    * (C64::new(sign, 0.0) + C64::from_polar(1.0, -theta))
                    / 2f64.sqrt();
                assert!((i_pow(-k) - rhs).norm() < 1e-12, "even n = {n}, j = {j}");
            }
        }
    }
}

#[test]
fn degenerate_couplings_freeze_the_uniform_state() {
    assert!(matches!(compile(5, 0.8, 0.8), Err(Error::DegenerateCoupling { .. })));
    for n in [2, 3, 6] {
        let graph = ideal(n, 0.8, 0.8).unwrap();
        let uniform = embed(&WBasisState::uniform(n).unwrap()).unwrap();
        for t in [0.1, 1.0, 7.3, 40.0] {
            let out = graph.propagate(&uniform, t).unwrap();
            let overlap = uniform.inner(&out).unwrap().norm();
            assert!((overlap - 1.0).abs() < 1e-12, "n = {n}, t = {t}");
        }
    }
}

#[test]
fn imperfect_couplings_degrade_the_ideal_plan() {
    let graph = perturbed_n3(1.0, 0.02, 0.06, 0.05, ZzScaling::ProportionalToXy).unwrap();
    let plan = compile(3, 1.0, 0.05).unwrap();
    let out = remove_phase(&execute(&plan, &graph, Engine::Dense).unwrap(), plan.expected_phase);
    let f = fidelity_frobenius(&out, &ghz_target(3).unwrap().state, true).unwrap();
    assert!(f < 0.97 && f > 0.95);
}

#[test]
fn rotation_display() {
    assert_eq!(Rotation::qubit(2, Axis::Z, 1.0).to_string(), "Rz(1.000000) on q2");
}
