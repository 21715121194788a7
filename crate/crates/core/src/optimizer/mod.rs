//! Recover fidelity lost to coupling imperfections by re-tuning the
//! entangling time and the final rotations.
//!
//! The initial collective `Ry(π/2)` is never a parameter. The objective is
//! `1 - F`, where `F` is the Frobenius fidelity against the GHZ state after
//! removing the ideal plan's expected phase and aligning the residual one.

mod simplex;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{self, Axis, SpectralDecomposition, StateVector, MAX_MATRIX_QUBITS};
use crate::error::{input, Error, Result};
use crate::hamiltonians::{perturbed_n3, CouplingGraph, ZzScaling};
use crate::protocol::{compile, ghz_target, Parity, ProtocolPlan, Rotation};
use crate::C64;

pub use simplex::{Simplex, SimplexOutcome};

/// Which final pulses are free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Odd `N`: `t` and an x-angle per qubit.
    OddX,
    /// Even `N`: `t` and the qubit-1 z angle.
    EvenRestricted,
    /// Even `N`: `t` and a final y-angle per qubit, qubit-1 z angle fixed.
    EvenFull,
}

impl Family {
    pub fn default_for(n: usize) -> Self {
        match Parity::of(n) {
            Parity::Odd => Family::OddX,
            Parity::Even => Family::EvenRestricted,
        }
    }
}

/// Optimizer settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Simplex spread at which a descent counts as converged.
    pub tolerance: f64,
    /// Evaluation budget per start.
    pub max_evals: usize,
    /// Number of starts; start 0 is the uncorrected point.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_evals: 20_000, restarts: 8, seed: 0 }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tolerance >= 0.0) || !self.tolerance.is_finite() {
            return input(format!("tolerance must be finite and nonnegative, got {}", self.tolerance));
        }
        if self.restarts == 0 || self.max_evals == 0 {
            return input("restarts and max_evals must be positive");
        }
        Ok(())
    }
}

/// A perturbed graph together with the compiled ideal plan for its
/// reference couplings and the cached spectrum of its Hamiltonian.
#[derive(Debug, Clone)]
pub struct OptimizationProblem {
    graph: CouplingGraph,
    family: Family,
    plan: ProtocolPlan,
    spectral: SpectralDecomposition,
    prepared: Vec<C64>,
    target: StateVector,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl OptimizationProblem {
    pub fn new(graph: CouplingGraph, family: Family) -> Result<Self> {
        let n = graph.n_qubits();
        if n > MAX_MATRIX_QUBITS {
            return Err(Error::Capacity { what: "optimizer", n, max: MAX_MATRIX_QUBITS });
        }
        let parity_ok = match family {
            Family::OddX => n % 2 == 1,
            Family::EvenRestricted | Family::EvenFull => n % 2 == 0,
        };
        if !parity_ok {
            return input(format!("family {family:?} does not apply to {n} qubits"));
        }
        let plan = compile(n, graph.g_ref(), graph.gz_ref())?;
        let spectral = SpectralDecomposition::new(&graph.to_dense()?)?;
        let mut psi = StateVector::ground(n)?;
        psi.rotate_all(plan.initial.axis, plan.initial.angle);
        let t = plan.entangle_duration;
        let (angle_hi, count) = match family {
            Family::OddX | Family::EvenFull => (PI, n),
            Family::EvenRestricted => (2.0 * PI, 1),
        };
        let mut lower = vec![0.5 * t];
        let mut upper = vec![1.5 * t];
        lower.extend(std::iter::repeat_n(0.0, count));
        upper.extend(std::iter::repeat_n(angle_hi, count));
        Ok(Self {
            target: ghz_target(n)?.state,
            prepared: psi.into_amplitudes(),
            graph,
            family,
            plan,
            spectral,
            lower,
            upper,
        })
    }

    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n_qubits(&self) -> usize {
        self.graph.n_qubits()
    }

    /// Ideal plan for the reference couplings.
    pub fn plan(&self) -> &ProtocolPlan {
        &self.plan
    }

    pub fn n_params(&self) -> usize {
        self.lower.len()
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    /// `[t, angles…]` of the uncorrected plan.
    pub fn ideal_params(&self) -> Vec<f64> {
        let mut p = vec![self.plan.entangle_duration];
        match self.family {
            Family::OddX => p.extend(std::iter::repeat_n(self.plan.finals[0].angle, self.n_qubits())),
            Family::EvenFull => p.extend(std::iter::repeat_n(self.plan.finals[0].angle, self.n_qubits())),
            Family::EvenRestricted => p.push(self.plan.finals[1].angle),
        }
        p
    }

    fn finals(&self, params: &[f64]) -> Vec<Rotation> {
        let n = self.n_qubits();
        let angles = &params[1..];
        match self.family {
            Family::OddX => (1..=n).map(|k| Rotation::qubit(k, Axis::X, angles[k - 1])).collect(),
            Family::EvenFull => {
                let mut f: Vec<Rotation> = (1..=n).map(|k| Rotation::qubit(k, Axis::Y, angles[k - 1])).collect();
                f.extend_from_slice(&self.plan.finals[1..]);
                f
            }
            Family::EvenRestricted => {
                let mut f = self.plan.finals.clone();
                f[1].angle = angles[0];
                f
            }
        }
    }

    fn check(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params() {
            return input(format!("{} parameters given, problem has {}", params.len(), self.n_params()));
        }
        for (i, ((p, lo), hi)) in params.iter().zip(&self.lower).zip(&self.upper).enumerate() {
            if !(p >= lo && p <= hi) {
                return input(format!("parameter {i} = {p} outside [{lo}, {hi}]"));
            }
        }
        Ok(())
    }

    fn run(&self, params: &[f64]) -> StateVector {
        let amps = self.spectral.evolve_amplitudes(&self.prepared, params[0]);
        let mut psi = StateVector::new(self.n_qubits(), amps).expect("register size checked at construction");
        for r in self.finals(params) {
            match r.target {
                crate::protocol::Target::All => psi.rotate_all(r.axis, r.angle),
                crate::protocol::Target::Qubit(k) => psi.rotate(k, r.axis, r.angle).expect("qubit in range"),
            }
        }
        psi
    }

    /// Output state with the expected phase removed and the residual global
    /// phase aligned so that `⟨GHZ|ψ⟩ ≥ 0`.
    pub fn aligned_state(&self, params: &[f64]) -> Result<StateVector> {
        self.check(params)?;
        let psi = self.run(params).scaled(self.plan.expected_phase.conj().value());
        let overlap = psi.inner(&self.target)?;
        let r = overlap.norm();
        Ok(if r > 0.0 { psi.scaled(overlap / r) } else { psi })
    }

    /// Output state with only the expected phase removed.
    pub fn dephased_state(&self, params: &[f64]) -> Result<StateVector> {
        self.check(params)?;
        Ok(self.run(params).scaled(self.plan.expected_phase.conj().value()))
    }

    fn objective_unchecked(&self, params: &[f64]) -> f64 {
        let psi = self.run(params).scaled(self.plan.expected_phase.conj().value());
        1.0 - dense::frobenius_fidelity(psi.amplitudes(), self.target.amplitudes(), true)
    }

    /// `1 - F` at `params`; out-of-bounds parameters are an input error.
    pub fn objective(&self, params: &[f64]) -> Result<f64> {
        self.check(params)?;
        Ok(self.objective_unchecked(params))
    }

    fn steps(&self) -> Vec<f64> {
        let mut s = vec![0.05 * self.plan.entangle_duration];
        s.extend(std::iter::repeat_n(0.1, self.n_params() - 1));
        s
    }

    /// Start points: the uncorrected parameters, then seeded perturbations of
    /// up to 5% in `t` and 0.1 rad in each angle.
    fn starts(&self, config: &OptimizerConfig) -> Vec<Vec<f64>> {
        let ideal = self.ideal_params();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut out = vec![ideal.clone()];
        for _ in 1..config.restarts {
            let mut p = ideal.clone();
            p[0] *= 1.0 + rng.random_range(-0.05..=0.05);
            for a in p.iter_mut().skip(1) {
                *a += rng.random_range(-0.1..=0.1);
            }
            for ((v, lo), hi) in p.iter_mut().zip(&self.lower).zip(&self.upper) {
                *v = v.clamp(*lo, *hi);
            }
            out.push(p);
        }
        out
    }
}

/// Best point found by [`optimize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub family: Family,
    pub t_opt: f64,
    pub t_ideal: f64,
    pub angles_opt: Vec<f64>,
    pub fidelity: f64,
    pub fidelity_uncorrected: f64,
    pub objective_evaluations: usize,
    pub converged: bool,
}

impl OptimizationResult {
    pub fn t_ratio(&self) -> f64 {
        self.t_opt / self.t_ideal
    }

    pub fn params(&self) -> Vec<f64> {
        let mut p = vec![self.t_opt];
        p.extend_from_slice(&self.angles_opt);
        p
    }
}

/// Multistart bounded simplex descent. Starts run concurrently; the best
/// objective wins and ties go to the lowest start index.
pub fn optimize(problem: &OptimizationProblem, config: &OptimizerConfig) -> Result<OptimizationResult> {
    config.validate()?;
    let steps = problem.steps();
    let simplex = Simplex {
        lower: &problem.lower,
        upper: &problem.upper,
        steps: &steps,
        tolerance: config.tolerance,
        max_evals: config.max_evals,
    };
    let outcomes: Vec<SimplexOutcome> = problem
        .starts(config)
        .par_iter()
        .map(|x0| simplex.minimize(|p| problem.objective_unchecked(p), x0))
        .collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.f.total_cmp(&b.f).then(i.cmp(j)))
        .map(|(_, o)| o)
        .expect("at least one start");
    if !best.f.is_finite() {
        return Err(Error::Numerical("objective is not finite".into()));
    }
    let uncorrected = 1.0 - problem.objective_unchecked(&problem.ideal_params());
    Ok(OptimizationResult {
        family: problem.family,
        t_opt: best.x[0],
        t_ideal: problem.plan.entangle_duration,
        angles_opt: best.x[1..].to_vec(),
        fidelity: 1.0 - best.f,
        fidelity_uncorrected: uncorrected,
        objective_evaluations: evaluations,
        converged: best.converged,
    })
}

/// Four-qubit optimization over the entangling time and the qubit-1 z angle
/// only.
pub fn optimize_restricted_n4(graph: &CouplingGraph, config: &OptimizerConfig) -> Result<OptimizationResult> {
    if graph.n_qubits() != 4 {
        return input(format!("restricted optimization is defined for 4 qubits, got {}", graph.n_qubits()));
    }
    optimize(&OptimizationProblem::new(graph.clone(), Family::EvenRestricted)?, config)
}

/// One row of the imperfection sweep. Failed rows keep their `eta13` and
/// carry the error message.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub eta13: f64,
    pub result: std::result::Result<OptimizationResult, String>,
}

impl SweepRow {
    /// Row completed but the best start did not meet the tolerance.
    pub fn flagged(&self) -> bool {
        !matches!(&self.result, Ok(r) if r.converged)
    }
}

/// Settings of the three-qubit imperfection sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub g12: f64,
    pub eta23: f64,
    pub kappa: f64,
    pub eta13_min: f64,
    pub eta13_max: f64,
    pub steps: usize,
    pub zz: ZzScaling,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { g12: 1.0, eta23: 0.02, kappa: 0.05, eta13_min: 0.0, eta13_max: 0.10, steps: 11, zz: ZzScaling::default() }
    }
}

impl SweepSpec {
    /// Evenly spaced `η13` values, endpoints included.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(0.0..=0.10).contains(&self.eta13_min) || !(0.0..=0.10 + 1e-12).contains(&self.eta13_max) || self.eta13_min > self.eta13_max {
            return input(format!("η13 range [{}, {}] must lie within [0, 0.10]", self.eta13_min, self.eta13_max));
        }
        match self.steps {
            0 => input("a sweep needs at least one step"),
            1 => Ok(vec![self.eta13_min]),
            s => {
                let h = (self.eta13_max - self.eta13_min) / (s - 1) as f64;
                Ok((0..s).map(|i| self.eta13_min + h * i as f64).collect())
            }
        }
    }
}

/// Optimize every grid point concurrently; rows come back in grid order.
pub fn sweep(spec: &SweepSpec, config: &OptimizerConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let grid = spec.grid()?;
    Ok(grid
        .par_iter()
        .map(|&eta13| {
            let result = perturbed_n3(spec.g12, spec.eta23, eta13, spec.kappa, spec.zz)
                .and_then(|g| OptimizationProblem::new(g, Family::OddX))
                .and_then(|p| optimize(&p, config))
                .map_err(|e| e.to_string());
            SweepRow { eta13, result }
        })
        .collect())
}

pub const SWEEP_HEADER: &str = "eta13,t_ratio,alpha1,alpha2,alpha3,F_opt,F_uncorrected";

/// Write sweep rows as CSV. Failed rows are written with NaN fields.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in rows {
        match &row.result {
            Ok(r) => {
                let a: Vec<String> = r.angles_opt.iter().map(|x| format!("{:.6}", x / FRAC_PI_2)).collect();
                writeln!(
                    out,
                    "{:.4},{:.6},{},{:.6},{:.6}",
                    row.eta13,
                    r.t_ratio(),
                    a.join(","),
                    r.fidelity,
                    r.fidelity_uncorrected
                )?;
            }
            Err(_) => writeln!(out, "{:.4},NaN,NaN,NaN,NaN,NaN,NaN", row.eta13)?,
        }
    }
    Ok(())
}

/// Pairwise XY multipliers from a list of `(a, b, m)`; pairs not listed get 1.
pub fn multipliers_with_defaults(n: usize, given: &[(usize, usize, f64)]) -> BTreeMap<(usize, usize), f64> {
    let mut m = BTreeMap::new();
    for a in 1..n {
        for b in a + 1..=n {
            m.insert((a, b), 1.0);
        }
    }
    for &(a, b, v) in given {
        m.insert((a.min(b), a.max(b)), v);
    }
    m
}
