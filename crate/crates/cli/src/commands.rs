//! Command bodies. Each returns its rendered output; the caller decides
//! where it goes.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use ghznet::dense::{bitstring, fidelity_frobenius, StateVector, MAX_MATRIX_QUBITS};
use ghznet::hamiltonians::star_to_delta;
use ghznet::optimizer::{optimize, sweep, write_sweep_csv, OptimizationProblem, OptimizationResult, SweepRow};
use ghznet::protocol::{compile, execute, ghz_target, remove_phase, verify};
use ghznet::symmetric::{analytic_eigenvalues, w_sector_eigenvalues};

use crate::config::RunConfig;
use crate::error::CliError;

/// Fidelity below which an ideal-graph protocol run counts as failed.
pub const PROTOCOL_TOLERANCE: f64 = 1e-8;

/// Rendered output plus an optional failure raised after rendering.
pub struct Report {
    pub primary: String,
    pub secondary: Option<String>,
    pub failure: Option<CliError>,
}

impl Report {
    fn ok(primary: String) -> Self {
        Self { primary, secondary: None, failure: None }
    }
}

fn ns(cfg: &RunConfig, t: f64) -> Result<Option<f64>, CliError> {
    let Some(mhz) = cfg.report_mhz else { return Ok(None) };
    if !(mhz > 0.0) || !mhz.is_finite() {
        return Err(CliError::Config(format!("report_mhz must be positive, got {mhz}")));
    }
    if cfg.g == 0.0 {
        return Err(CliError::Config("report_mhz needs a nonzero reference coupling g".into()));
    }
    // time unit is 1/g with g = 2π·mhz·1e6 rad/s rescaled to the configured g
    Ok(Some(t * cfg.g.abs() * 1e3 / (2.0 * PI * mhz)))
}

pub fn eigs(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.n_qubits;
    let table = analytic_eigenvalues(n, cfg.g, cfg.gz)?;
    let numeric = if n <= MAX_MATRIX_QUBITS {
        Some(w_sector_eigenvalues(&ghznet::hamiltonians::ideal(n, cfg.g, cfg.gz)?.to_dense()?, n)?)
    } else {
        None
    };
    let mut out = String::from("j,lambda_analytic,lambda_numeric,abs_diff\n");
    for (j, &a) in table.lambda.iter().enumerate() {
        match &numeric {
            Some(num) => writeln!(out, "{j},{a:.12},{:.12},{:.3e}", num[j], (a - num[j]).abs()),
            None => writeln!(out, "{j},{a:.12},,"),
        }
        .expect("write to string");
    }
    Ok(Report::ok(out))
}

pub fn protocol(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut out = String::new();
    let (fidelity, ideal_graph, plan) = if cfg.perturbation.is_none() {
        let v = verify(cfg.n_qubits, cfg.g, cfg.gz, cfg.engine)?;
        writeln!(out, "{}", v.plan).unwrap();
        writeln!(out, "engine = {}", cfg.engine).unwrap();
        writeln!(out, "fidelity = {:.6}", v.fidelity).unwrap();
        writeln!(out, "1 - fidelity = {:.3e}", 1.0 - v.fidelity).unwrap();
        writeln!(out, "measured phase = {}", v.measured_phase).unwrap();
        writeln!(out, "expected phase = {}", v.expected_phase).unwrap();
        writeln!(out, "phase error = {:.3e}", v.phase_error()).unwrap();
        (v.fidelity, true, v.plan)
    } else {
        let graph = cfg.graph()?;
        let plan = compile(cfg.n_qubits, graph.g_ref(), graph.gz_ref())?;
        let state = remove_phase(&execute(&plan, &graph, cfg.engine)?, plan.expected_phase);
        let f = fidelity_frobenius(&state, &ghz_target(cfg.n_qubits)?.state, true)?;
        writeln!(out, "{plan}").unwrap();
        writeln!(out, "engine = {}", cfg.engine).unwrap();
        writeln!(out, "perturbed graph: fidelity of the ideal plan = {f:.6}").unwrap();
        (f, false, plan)
    };
    if let Some(t) = ns(cfg, plan.entangle_duration)? {
        writeln!(out, "entangling time = {t:.3} ns at g/2π = {} MHz", cfg.report_mhz.unwrap()).unwrap();
    }
    let failure = (ideal_graph && fidelity < 1.0 - PROTOCOL_TOLERANCE)
        .then(|| CliError::Failed(format!("protocol fidelity {fidelity:.10} is below 1 - {PROTOCOL_TOLERANCE:e}")));
    Ok(Report { primary: out, secondary: None, failure })
}

pub const RESULT_HEADER_PREFIX: &str = "n_qubits,family,t_ideal,t_opt,t_ratio";

fn result_csv(n: usize, r: &OptimizationResult, t_ns: Option<f64>) -> String {
    let mut head = String::from(RESULT_HEADER_PREFIX);
    for k in 1..=r.angles_opt.len() {
        write!(head, ",angle{k}_over_half_pi").unwrap();
    }
    head.push_str(",F_opt,F_uncorrected,evaluations,converged");
    if t_ns.is_some() {
        head.push_str(",t_opt_ns");
    }
    let family = serde_plain(r.family);
    let mut row = format!("{n},{family},{:.6},{:.6},{:.6}", r.t_ideal, r.t_opt, r.t_ratio());
    for a in &r.angles_opt {
        write!(row, ",{:.6}", a / FRAC_PI_2).unwrap();
    }
    write!(row, ",{:.6},{:.6},{},{}", r.fidelity, r.fidelity_uncorrected, r.objective_evaluations, r.converged).unwrap();
    if let Some(t) = t_ns {
        write!(row, ",{t:.3}").unwrap();
    }
    format!("{head}\n{row}\n")
}

fn serde_plain(f: ghznet::optimizer::Family) -> &'static str {
    use ghznet::optimizer::Family::*;
    match f {
        OddX => "odd_x",
        EvenRestricted => "even_restricted",
        EvenFull => "even_full",
    }
}

/// `index,bitstring,re,im` at six decimals; bitstrings in qubit order.
pub fn state_csv(psi: &StateVector) -> String {
    let mut out = String::from("index,bitstring,re,im\n");
    for (i, a) in psi.amplitudes().iter().enumerate() {
        // avoid printing "-0.000000"
        let fix = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
        writeln!(out, "{i},{},{:.6},{:.6}", bitstring(i, psi.n_qubits()), fix(a.re), fix(a.im)).unwrap();
    }
    out
}

pub fn optimize_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let problem = OptimizationProblem::new(cfg.graph()?, cfg.family())?;
    let result = optimize(&problem, &cfg.optimizer)?;
    let state = problem.aligned_state(&result.params())?;
    let failure = (!result.converged).then(|| {
        CliError::Failed(format!("optimizer did not converge within {} evaluations per start", cfg.optimizer.max_evals))
    });
    Ok(Report {
        primary: result_csv(cfg.n_qubits, &result, ns(cfg, result.t_opt)?),
        secondary: Some(state_csv(&state)),
        failure,
    })
}

pub fn sweep_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let rows: Vec<SweepRow> = sweep(&cfg.sweep, &cfg.optimizer)?;
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).expect("write to memory");
    let flagged: Vec<String> = rows.iter().filter(|r| r.flagged()).map(|r| format!("{:.4}", r.eta13)).collect();
    let failure = (!flagged.is_empty()).then(|| CliError::Failed(format!("flagged rows at eta13 = {}", flagged.join(", "))));
    Ok(Report { primary: String::from_utf8(buf).expect("ascii csv"), secondary: None, failure })
}

pub fn star2delta(c_star: f64, n: usize) -> Result<Report, CliError> {
    Ok(Report::ok(format!("{}\n", star_to_delta(c_star, n)?)))
}
