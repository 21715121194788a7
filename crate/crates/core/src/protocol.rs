//! Compile, execute and verify the single-pulse GHZ protocols.
//!
//! Odd `N`:  `Rx(π/2)^⊗N · U(t) · Ry(π/2)^⊗N |0…0⟩`
//! Even `N`: `Rz(θ)_1 · Ry(π/2)^⊗N · U(t) · Ry(π/2)^⊗N |0…0⟩`
//!
//! with `U(t) = e^{-iHt}`, `t = π / 2|g - g̃|` and `θ(N) = (π/2)[2 + (-1)^{N/2}]`.
//! For even `N` with `g < g̃` two extra `Rz(π/2)` pulses on qubits 2 and 3
//! (qubits 1 and 2 when `N = 2`) remove the relative sign between the GHZ
//! branches.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dense::{self, global_phase_between, Axis, GlobalPhase, StateVector};
use crate::error::{input, Error, Result};
use crate::hamiltonians::{self, CouplingGraph};
use crate::symmetric::{self, analytic_eigenvalues, collective_rotation, entangle_phases, WBasisState};
use crate::C64;

/// Which qubits a rotation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    All,
    Qubit(usize),
}

/// Gate-frame rotation `exp(-i angle σ_axis / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub target: Target,
    pub axis: Axis,
    pub angle: f64,
}

impl Rotation {
    pub fn all(axis: Axis, angle: f64) -> Self {
        Self { target: Target::All, axis, angle }
    }

    pub fn qubit(k: usize, axis: Axis, angle: f64) -> Self {
        Self { target: Target::Qubit(k), axis, angle }
    }

    fn apply(&self, psi: &mut StateVector) -> Result<()> {
        match self.target {
            Target::All => {
                psi.rotate_all(self.axis, self.angle);
                Ok(())
            }
            Target::Qubit(k) => psi.rotate(k, self.axis, self.angle),
        }
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let on = match self.target {
            Target::All => "all".to_string(),
            Target::Qubit(k) => format!("q{k}"),
        };
        write!(f, "R{}({:.6}) on {on}", self.axis, self.angle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Simulation backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Dense,
    Symmetric,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Dense => "dense",
            Engine::Symmetric => "symmetric",
        })
    }
}

/// A compiled pulse sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolPlan {
    pub n_qubits: usize,
    pub g: f64,
    pub gz: f64,
    pub initial: Rotation,
    pub entangle_duration: f64,
    pub finals: Vec<Rotation>,
    pub expected_phase: GlobalPhase,
    pub parity: Parity,
}

impl fmt::Display for ProtocolPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n_qubits = {} ({:?}), g = {}, gz = {}", self.n_qubits, self.parity, self.g, self.gz)?;
        writeln!(f, "  1. {}", self.initial)?;
        writeln!(f, "  2. U_ent for t = {:.10}", self.entangle_duration)?;
        for (i, r) in self.finals.iter().enumerate() {
            writeln!(f, "  {}. {}", i + 3, r)?;
        }
        write!(f, "  expected phase = {}", self.expected_phase)
    }
}

/// `π / 2|g - g̃|`.
pub fn entangling_time(g: f64, gz: f64) -> Result<f64> {
    if !g.is_finite() || !gz.is_finite() {
        return input("couplings must be finite");
    }
    if g == gz {
        return Err(Error::DegenerateCoupling { g });
    }
    Ok(PI / (2.0 * (g - gz).abs()))
}

/// `θ(N) = (π/2)[2 + (-1)^{N/2}]` for even `N`.
pub fn theta(n: usize) -> Result<f64> {
    if n == 0 || n % 2 == 1 {
        return input(format!("θ(N) is defined for even N, got {n}"));
    }
    let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(FRAC_PI_2 * (2.0 + sign))
}

/// Global phase carried by the ideal protocol output relative to the GHZ
/// state.
pub fn expected_phase(n: usize, g: f64, gz: f64) -> Result<GlobalPhase> {
    let t = entangling_time(g, gz)?;
    let lambda0 = (n * (n - 1) / 2) as f64 * gz / 2.0;
    let energy = GlobalPhase::from_angle(-lambda0 * t);
    let branch = match Parity::of(n) {
        // (-1)^((N-3)/2) π/4; N = 1 never reaches here
        Parity::Odd => {
            let sign = if ((n as i64 - 3) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            GlobalPhase::from_angle(sign * FRAC_PI_4)
        }
        Parity::Even if g < gz => GlobalPhase::from_angle(PI),
        Parity::Even => GlobalPhase::from_angle((n as f64 / 2.0 - 1.0) * PI),
    };
    Ok(energy * branch)
}

/// Compile the ideal pulse sequence for `n` qubits.
pub fn compile(n: usize, g: f64, gz: f64) -> Result<ProtocolPlan> {
    if n < 2 {
        return input(format!("the protocol needs n >= 2, got {n}"));
    }
    if n > symmetric::MAX_SYMMETRIC_QUBITS {
        return Err(Error::Capacity { what: "protocol", n, max: symmetric::MAX_SYMMETRIC_QUBITS });
    }
    let t = entangling_time(g, gz)?;
    let parity = Parity::of(n);
    let finals = match parity {
        Parity::Odd => vec![Rotation::all(Axis::X, FRAC_PI_2)],
        Parity::Even => {
            let mut f = vec![Rotation::all(Axis::Y, FRAC_PI_2), Rotation::qubit(1, Axis::Z, theta(n)?)];
            if g < gz {
                let (a, b) = if n == 2 { (1, 2) } else { (2, 3) };
                f.push(Rotation::qubit(a, Axis::Z, FRAC_PI_2));
                f.push(Rotation::qubit(b, Axis::Z, FRAC_PI_2));
            }
            f
        }
    };
    Ok(ProtocolPlan {
        n_qubits: n,
        g,
        gz,
        initial: Rotation::all(Axis::Y, FRAC_PI_2),
        entangle_duration: t,
        finals,
        expected_phase: expected_phase(n, g, gz)?,
        parity,
    })
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzTarget {
    pub n_qubits: usize,
    pub state: StateVector,
}

pub fn ghz_target(n: usize) -> Result<GhzTarget> {
    if n < 2 {
        return input(format!("GHZ target needs n >= 2, got {n}"));
    }
    let state = StateVector::new(n, dense::ghz_amplitudes(n))?;
    Ok(GhzTarget { n_qubits: n, state })
}

fn check_plan(plan: &ProtocolPlan, graph: &CouplingGraph) -> Result<()> {
    if plan.n_qubits != graph.n_qubits() {
        return input(format!("{}-qubit plan run on a {}-qubit graph", plan.n_qubits, graph.n_qubits()));
    }
    Ok(())
}

/// Run `plan` from `|0…0⟩` under `graph`.
///
/// The symmetric engine needs an ideal graph and a collective initial pulse.
/// Leading collective finals run in the W basis; any remaining per-qubit
/// rotation is applied after embedding in the dense register.
pub fn execute(plan: &ProtocolPlan, graph: &CouplingGraph, engine: Engine) -> Result<StateVector> {
    check_plan(plan, graph)?;
    match engine {
        Engine::Dense => {
            let mut psi = StateVector::ground(plan.n_qubits)?;
            plan.initial.apply(&mut psi)?;
            let mut psi = graph.propagate(&psi, plan.entangle_duration)?;
            for r in &plan.finals {
                r.apply(&mut psi)?;
            }
            Ok(psi)
        }
        Engine::Symmetric => {
            let split = plan.finals.iter().position(|r| r.target != Target::All).unwrap_or(plan.finals.len());
            let w = run_symmetric(plan, graph, &plan.finals[..split])?;
            let mut psi = symmetric::embed(&w)?;
            for r in &plan.finals[split..] {
                r.apply(&mut psi)?;
            }
            Ok(psi)
        }
    }
}

/// Run a plan whose every pulse is collective entirely in the W basis.
pub fn execute_symmetric(plan: &ProtocolPlan, graph: &CouplingGraph) -> Result<WBasisState> {
    check_plan(plan, graph)?;
    if let Some(r) = plan.finals.iter().find(|r| r.target != Target::All) {
        return Err(Error::EngineCapability(format!("non-collective pulse {r} leaves the symmetric subspace")));
    }
    run_symmetric(plan, graph, &plan.finals)
}

fn run_symmetric(plan: &ProtocolPlan, graph: &CouplingGraph, finals: &[Rotation]) -> Result<WBasisState> {
    if !graph.is_ideal() {
        return Err(Error::EngineCapability("the symmetric engine needs uniform couplings".into()));
    }
    if plan.initial.target != Target::All {
        return Err(Error::EngineCapability("initial pulse must be collective".into()));
    }
    let n = plan.n_qubits;
    let table = analytic_eigenvalues(n, graph.g_ref(), graph.gz_ref())?;
    let mut w = collective_rotation(&WBasisState::w(n, 0)?, plan.initial.axis, plan.initial.angle);
    w = entangle_phases(&w, &table, plan.entangle_duration)?;
    for r in finals {
        w = collective_rotation(&w, r.axis, r.angle);
    }
    Ok(w)
}

/// Outcome of an ideal end-to-end run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub plan: ProtocolPlan,
    /// Phase-aligned Frobenius fidelity against the GHZ state.
    pub fidelity: f64,
    pub measured_phase: GlobalPhase,
    pub expected_phase: GlobalPhase,
}

impl Verification {
    pub fn phase_error(&self) -> f64 {
        self.measured_phase.distance(&self.expected_phase)
    }
}

/// Compile, execute on the ideal graph and compare with the GHZ state.
///
/// With the symmetric engine the comparison happens in the W basis, so it
/// works beyond dense reach. Trailing per-qubit z pulses are folded into the
/// target: both GHZ branches are eigenstates of them.
pub fn verify(n: usize, g: f64, gz: f64, engine: Engine) -> Result<Verification> {
    let plan = compile(n, g, gz)?;
    let graph = hamiltonians::ideal(n, g, gz)?;
    let (fidelity, measured_phase) = match engine {
        Engine::Symmetric => verify_in_w_basis(&plan, &graph)?,
        Engine::Dense => {
            let out = execute(&plan, &graph, engine)?;
            let target = ghz_target(n)?;
            (dense::fidelity_frobenius(&out, &target.state, true)?, global_phase_between(&out, &target.state)?)
        }
    };
    let expected_phase = plan.expected_phase;
    Ok(Verification { plan, fidelity, measured_phase, expected_phase })
}

fn verify_in_w_basis(plan: &ProtocolPlan, graph: &CouplingGraph) -> Result<(f64, GlobalPhase)> {
    let n = plan.n_qubits;
    let split = plan.finals.iter().position(|r| r.target != Target::All).unwrap_or(plan.finals.len());
    let tail = &plan.finals[split..];
    if let Some(r) = tail.iter().find(|r| r.target == Target::All || r.axis != Axis::Z) {
        return Err(Error::EngineCapability(format!("pulse {r} after a per-qubit pulse")));
    }
    let w = run_symmetric(plan, graph, &plan.finals[..split])?;
    // Rz(α)|0⟩ = e^{-iα/2}|0⟩, Rz(α)|1⟩ = e^{iα/2}|1⟩
    let half: f64 = tail.iter().map(|r| r.angle / 2.0).sum();
    let c = w.coeffs();
    let s = FRAC_1_SQRT_2;
    let branches = [c[0] * C64::from_polar(s, -half), c[n] * C64::from_polar(s, half)];
    // distance to the target only involves the two branch amplitudes and the
    // norm, which the diagonal pulses preserve
    let overlap = branches[0] + branches[1];
    let norm2 = w.norm().powi(2);
    let fidelity = 1.0 - (norm2 + 1.0 - 2.0 * overlap.norm()).max(0.0).sqrt();
    let r = overlap.norm();
    if r < (1.0 - dense::PHASE_TOL) * norm2.sqrt() {
        return Err(Error::NoPhase { overlap: r });
    }
    Ok((fidelity, GlobalPhase::new(overlap / r)?))
}

/// `state · conj(phase)`.
pub fn remove_phase(state: &StateVector, phase: GlobalPhase) -> StateVector {
    state.scaled(phase.conj().value())
}

/// Relative phase `a_{1…1} / a_{0…0}` between the two GHZ branches.
pub fn branch_phase(state: &StateVector) -> Result<C64> {
    let a = state.amplitudes();
    let (lo, hi) = (a[0], a[a.len() - 1]);
    if lo.norm() < 1e-6 {
        return Err(Error::Numerical("GHZ branch |0…0⟩ is empty".into()));
    }
    Ok(hi / lo)
}
