//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ghznet::dense::{Axis, DenseOperator, StateVector};
use ghznet::hamiltonians::{ideal, perturbed_general, perturbed_n3, ZzScaling};
use ghznet::optimizer::{optimize, optimize_restricted_n4, sweep, Family, OptimizationProblem, OptimizerConfig, SweepSpec};
use ghznet::protocol::{branch_phase, compile, execute, ghz_target, theta, verify, Engine};
use ghznet::symmetric::{
    analytic_eigenvalues, binomial, collective_dense, entangle_phases, ladder_apply, project, w_sector_eigenvalues,
    w_state_dense, Ladder, WBasisState,
};
use ghznet::{Error, C64};

struct Outcome {
    pass: bool,
    detail: String,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() <= limit_s
}

fn eigenvalue_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut graphs = 0;
    for n in 2..=10 {
        for _ in 0..20 {
            let g = rng.random_range(-2.0..2.0);
            let gz = rng.random_range(-2.0..2.0);
            let h = ideal(n, g, gz).unwrap().to_dense().unwrap();
            let analytic = analytic_eigenvalues(n, g, gz).unwrap();
            let numeric = w_sector_eigenvalues(&h, n).unwrap();
            for j in 0..=n {
                worst = worst.max((analytic.lambda[j] - numeric[j]).abs());
                let w = w_state_dense(n, j).unwrap();
                let hw = h.apply(&w).unwrap();
                worst_residual = worst_residual.max(hw.distance(&w.scaled(c(analytic.lambda[j], 0.0))).unwrap());
            }
            graphs += 1;
        }
    }
    let el = start.elapsed();
    Outcome {
        pass: worst <= 1e-10 && worst_residual <= 1e-10 && within(el, 60.0),
        detail: format!(
            "max |Δλ| = {worst:.2e}, max eigen-residual = {worst_residual:.2e} over {graphs} graphs ({:.2} s)",
            el.as_secs_f64()
        ),
    }
}

fn protocol_exactness() -> Outcome {
    let start = Instant::now();
    let mut worst_f = 0.0f64;
    let mut worst_phase = 0.0f64;
    for n in 2..=14 {
        for (g, gz) in [(1.0, 0.0), (1.0, 0.05), (1.0, -0.05)] {
            let v = verify(n, g, gz, Engine::Dense).unwrap();
            worst_f = worst_f.max(1.0 - v.fidelity);
            worst_phase = worst_phase.max(v.phase_error());
        }
    }
    // even N with g < g̃: corrected output carries no relative sign
    let mut worst_branch = 0.0f64;
    for n in (2..=14).step_by(2) {
        for (g, gz) in [(0.0, 1.0), (0.5, 1.0)] {
            let v = verify(n, g, gz, Engine::Dense).unwrap();
            worst_f = worst_f.max(1.0 - v.fidelity);
            worst_phase = worst_phase.max(v.phase_error());
            let out = execute(&v.plan, &ideal(n, g, gz).unwrap(), Engine::Dense).unwrap();
            worst_branch = worst_branch.max((branch_phase(&out).unwrap() - c(1.0, 0.0)).norm());
        }
    }
    let el = start.elapsed();
    Outcome {
        pass: worst_f <= 1e-10 && worst_phase <= 1e-8 && worst_branch <= 1e-8 && within(el, 120.0),
        detail: format!(
            "N = 2..14: max 1 - F = {worst_f:.2e}, max phase error = {worst_phase:.2e}, g < g̃ branch sign error = {worst_branch:.2e} ({:.2} s)",
            el.as_secs_f64()
        ),
    }
}

const ORIGINAL: [(f64, f64); 8] = [
    (0.706616, 0.0),
    (0.000697, 0.015431),
    (-0.002792, 0.010929),
    (0.002988, 0.017844),
    (0.002988, 0.017844),
    (-0.002792, 0.010929),
    (0.000697, 0.015431),
    (0.706616, 0.0),
];
const OPTIMIZED: [f64; 8] = [0.707099, 0.000692, -0.001956, 0.002566, 0.002566, -0.001956, 0.000692, 0.707099];

fn max_component_error(psi: &StateVector, reference: impl Iterator<Item = C64>) -> f64 {
    psi.amplitudes().iter().zip(reference).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

fn regression_n3() -> Outcome {
    let start = Instant::now();
    let graph = perturbed_n3(1.0, 0.02, 0.06, 0.05, ZzScaling::ProportionalToXy).unwrap();
    let problem = OptimizationProblem::new(graph, Family::OddX).unwrap();
    let ideal_params = problem.ideal_params();
    let original = problem.aligned_state(&ideal_params).unwrap();
    let f_orig = 1.0 - problem.objective(&ideal_params).unwrap();
    let e_orig = max_component_error(&original, ORIGINAL.iter().map(|&(r, i)| c(r, i)));

    let result = optimize(&problem, &OptimizerConfig::default()).unwrap();
    let optimized = problem.aligned_state(&result.params()).unwrap();
    let e_opt = max_component_error(&optimized, OPTIMIZED.iter().map(|&r| c(r, 0.0)));
    let ratio = result.t_ratio();
    let alphas: Vec<f64> = result.angles_opt.iter().map(|a| a / FRAC_PI_2).collect();
    let alpha_ok = alphas.iter().zip([0.9785, 0.9713, 0.9825]).all(|(a, r)| (a - r).abs() <= 0.005);
    let el = start.elapsed();
    let pass = (f_orig - 0.9628).abs() <= 5e-4
        && e_orig <= 5e-6
        && (result.fidelity - 0.9953).abs() <= 1e-3
        && (ratio - 1.0505).abs() <= 3e-3
        && alpha_ok
        && e_opt <= 5e-4
        && within(el, 30.0);
    Outcome {
        pass,
        detail: format!(
            "F_unc = {f_orig:.5} (state err {e_orig:.1e}), F_opt = {:.5}, t ratio = {ratio:.5}, α/(π/2) = ({:.4}, {:.4}, {:.4}), optimized state err {e_opt:.1e} ({:.2} s)",
            result.fidelity,
            alphas[0],
            alphas[1],
            alphas[2],
            el.as_secs_f64()
        ),
    }
}

fn sweep_property() -> Outcome {
    let start = Instant::now();
    let rows = sweep(&SweepSpec::default(), &OptimizerConfig::default()).unwrap();
    let mut ok = rows.len() == 11;
    let mut min_opt = f64::INFINITY;
    let mut min_gain = f64::INFINITY;
    for row in &rows {
        match &row.result {
            Ok(r) => {
                min_opt = min_opt.min(r.fidelity);
                min_gain = min_gain.min(r.fidelity - r.fidelity_uncorrected);
                ok &= r.fidelity >= r.fidelity_uncorrected && r.fidelity >= 0.99;
            }
            Err(_) => ok = false,
        }
    }
    Outcome {
        pass: ok,
        detail: format!(
            "{} rows, min F_opt = {min_opt:.5}, min (F_opt - F_unc) = {min_gain:.2e} ({:.2} s)",
            rows.len(),
            start.elapsed().as_secs_f64()
        ),
    }
}

fn restricted_n4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let config = OptimizerConfig::default();
    let mut worst = 0.0f64;
    let mut all_dominate = true;
    for _ in 0..10 {
        let given: Vec<(usize, usize, f64)> = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
            .iter()
            .map(|&(a, b)| (a, b, rng.random_range(0.9..=1.0)))
            .collect();
        let multipliers: BTreeMap<_, _> = given.iter().map(|&(a, b, m)| ((a, b), m)).collect();
        let graph = perturbed_general(4, 1.0, 0.05, &multipliers, ZzScaling::ProportionalToXy).unwrap();
        let restricted = optimize_restricted_n4(&graph, &config).unwrap();
        let full = optimize(&OptimizationProblem::new(graph, Family::EvenFull).unwrap(), &config).unwrap();
        worst = worst.max((full.fidelity - restricted.fidelity).abs());
        all_dominate &= restricted.fidelity >= restricted.fidelity_uncorrected;
    }
    Outcome {
        pass: worst <= 1e-3 && all_dominate,
        detail: format!("max |F_full - F_restricted| = {worst:.2e} over 10 graphs ({:.2} s)", start.elapsed().as_secs_f64()),
    }
}

fn identity_suites() -> Outcome {
    let start = Instant::now();
    let mut lemma = 0.0f64;
    let mut ladder = 0.0f64;
    let mut decomposition = 0.0f64;
    for n in 1..=6 {
        let plus = collective_dense(n, Ladder::Plus).unwrap();
        let minus = collective_dense(n, Ladder::Minus).unwrap();
        let z = collective_dense(n, Ladder::Z).unwrap();
        let dim = 1 << n;
        let id = DenseOperator::identity(dim);
        for j in 0..=n {
            for (op, s) in [(&plus, 2.0), (&minus, -2.0)] {
                let p = op.pow(j);
                let lhs = &z * &p;
                let rhs = &(&p * &z) + &p.scale(c(s * j as f64, 0.0));
                lemma = lemma.max(lhs.max_abs_diff(&rhs));
            }
            if j >= 1 {
                let pj = plus.pow(j);
                let pj1 = plus.pow(j - 1);
                let lhs = &minus * &pj;
                let rhs = &(&(&pj * &minus) - &(&pj1 * &z).scale(c(j as f64, 0.0))) - &pj1.scale(c((j * (j - 1)) as f64, 0.0));
                lemma = lemma.max(lhs.max_abs_diff(&rhs));
            }
            let w = w_state_dense(n, j).unwrap();
            for (op, which) in [(&plus, Ladder::Plus), (&minus, Ladder::Minus), (&z, Ladder::Z)] {
                let (projected, residual) = project(&op.apply(&w).unwrap());
                let exact = ladder_apply(&WBasisState::w(n, j).unwrap(), which);
                ladder = ladder.max(projected.distance(&exact).unwrap()).max(residual);
            }
        }
        if n >= 2 {
            let (g, gz) = (0.73, -0.41);
            let h = ideal(n, g, gz).unwrap().to_dense().unwrap();
            let nid = id.scale(c(n as f64, 0.0));
            let hg = &(&(&plus * &minus) + &(&minus * &plus)) - &nid;
            let hgz = &(&z * &z) - &nid;
            let rebuilt = (&hg.scale(c(2.0 * g, 0.0)) + &hgz.scale(c(gz, 0.0))).scale(c(0.25, 0.0));
            decomposition = decomposition.max(h.max_abs_diff(&rebuilt));
        }
    }

    let norm = |n: usize, j: usize| binomial(n, j).sqrt() / (2f64.sqrt() * 2f64.powf(n as f64 / 2.0));
    let i_pow = |k: usize| [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][k % 4];
    let mut expansion = 0.0f64;
    for n in (3..=9).step_by(2) {
        let mut psi = ghz_target(n).unwrap().state;
        psi.rotate_all(Axis::X, -FRAC_PI_2);
        let (w, r) = project(&psi);
        expansion = expansion.max(r);
        for j in 0..=n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let expect = i_pow(j) * (c(1.0, 0.0) + i_pow(n) * sign) * norm(n, j);
            expansion = expansion.max((w.coeffs()[j] - expect).norm());
        }
    }
    for n in (2..=8).step_by(2) {
        let th = theta(n).unwrap();
        let mut psi = ghz_target(n).unwrap().state;
        psi.rotate(1, Axis::Z, -th).unwrap();
        psi.rotate_all(Axis::Y, -FRAC_PI_2);
        let (w, r) = project(&psi);
        expansion = expansion.max(r);
        // Rz(θ) = e^{-iθ/2} diag(1, e^{iθ}); the phase-gate form drops e^{-iθ/2}
        let gauge = C64::from_polar(1.0, -th / 2.0);
        for j in 0..=n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let expect = (c(sign, 0.0) + C64::from_polar(1.0, -th)) * norm(n, j);
            expansion = expansion.max((w.coeffs()[j] * gauge - expect).norm());
        }
    }
    let pass = lemma <= 1e-12 && ladder <= 1e-12 && decomposition <= 1e-12 && expansion <= 1e-12;
    Outcome {
        pass,
        detail: format!(
            "lemmas {lemma:.1e}, ladder {ladder:.1e}, odd/even expansions {expansion:.1e}, H decomposition {decomposition:.1e} ({:.2} s)",
            start.elapsed().as_secs_f64()
        ),
    }
}

fn engine_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 2..=10 {
        for (g, gz) in [(1.0, 0.0), (1.0, 0.05), (1.0, -0.05), (0.3, 0.9)] {
            let plan = compile(n, g, gz).unwrap();
            let graph = ideal(n, g, gz).unwrap();
            let a = execute(&plan, &graph, Engine::Dense).unwrap();
            let b = execute(&plan, &graph, Engine::Symmetric).unwrap();
            worst = worst.max(a.distance(&b).unwrap());
        }
    }
    let mut large = Vec::new();
    let mut large_ok = true;
    for n in [1001, 1000] {
        let t0 = Instant::now();
        let v = verify(n, 1.0, 0.05, Engine::Symmetric).unwrap();
        let el = t0.elapsed();
        large_ok &= v.fidelity >= 1.0 - 1e-8 && v.phase_error() <= 1e-8 && within(el, 5.0);
        large.push(format!("N = {n}: 1 - F = {:.1e} in {:.2} s", 1.0 - v.fidelity, el.as_secs_f64()));
    }
    Outcome {
        pass: worst <= 1e-10 && large_ok,
        detail: format!(
            "N <= 10 max distance = {worst:.1e}; {} ({:.2} s total)",
            large.join(", "),
            start.elapsed().as_secs_f64()
        ),
    }
}

fn degeneracy_guard() -> Outcome {
    let start = Instant::now();
    let mut raised = true;
    for n in 2..=14 {
        for g in [1.0, 0.05, -0.3] {
            raised &= matches!(compile(n, g, g), Err(Error::DegenerateCoupling { .. }));
        }
    }
    let mut worst = 0.0f64;
    for n in 2..=10 {
        let graph = ideal(n, 0.6, 0.6).unwrap();
        let uniform = ghznet::symmetric::embed(&WBasisState::uniform(n).unwrap()).unwrap();
        for t in [0.01, 0.5, PI, 12.3, 97.0] {
            let out = graph.propagate(&uniform, t).unwrap();
            worst = worst.max((uniform.inner(&out).unwrap().norm() - 1.0).abs());
        }
    }
    for n in [50, 1000] {
        let table = analytic_eigenvalues(n, 0.6, 0.6).unwrap();
        let u = WBasisState::uniform(n).unwrap();
        for t in [0.5, 12.3] {
            let out = entangle_phases(&u, &table, t).unwrap();
            worst = worst.max((u.inner(&out).unwrap().norm() - 1.0).abs());
        }
    }
    Outcome {
        pass: raised && worst <= 1e-12,
        detail: format!(
            "degenerate-coupling error raised: {raised}, max ||⟨u|U u⟩| - 1| = {worst:.1e} ({:.2} s)",
            start.elapsed().as_secs_f64()
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 eigenvalue oracle", eigenvalue_oracle),
        ("2 protocol exactness", protocol_exactness),
        ("3 N=3 regression", regression_n3),
        ("4 imperfection sweep", sweep_property),
        ("5 N=4 restricted optimum", restricted_n4),
        ("6 identity suites", identity_suites),
        ("7 engine equivalence", engine_equivalence),
        ("8 degeneracy guard", degeneracy_guard),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>().map(String::as_str).or(e.downcast_ref::<&str>().copied()).unwrap_or("?")
            ),
        });
        println!("[{}] criterion {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
