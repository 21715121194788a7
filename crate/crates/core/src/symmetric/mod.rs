//! Symmetric-subspace engine over the generalized W states
//! `|W_j⟩ = C(N, j)^(-1/2) Σ_{|x| = j} |x⟩`.
//!
//! Ladder algebra follows the excitation frame of [`crate::dense`]:
//!
//! ```text
//! Σ+ |W_j⟩ = √((N - j)(j + 1)) |W_{j+1}⟩
//! Σ- |W_j⟩ = √(j (N - j + 1)) |W_{j-1}⟩
//! Σz |W_j⟩ = (2j - N) |W_j⟩
//! ```
//!
//! Collective rotations use the gate frame, so their generators are
//! `Σ+ + Σ-`, `i(Σ+ - Σ-)` and `-Σz`. The exchange Hamiltonian is diagonal in
//! this basis with eigenvalues `λ_j = j(N - j)(g - g̃) + C(N, 2) g̃ / 2`.

mod tridiag;

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dense::{self, pauli_on, Axis, DenseOperator, SpectralDecomposition, StateVector, UNIT_TOL};
use crate::error::{input, Error, Result};
use crate::C64;

use tridiag::SymTridiagonal;

/// Largest register handled by the symmetric engine.
pub const MAX_SYMMETRIC_QUBITS: usize = 10_000;

/// `C(n, k)` in floating point by cumulative ratios.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 1..=k {
        c = c * (n - k + i) as f64 / i as f64;
    }
    c
}

/// `ln C(n, j)` for every `j = 0..=n`.
pub fn ln_binomials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(acc);
    for j in 1..=n {
        acc += ((n - j + 1) as f64 / j as f64).ln();
        out.push(acc);
    }
    // exact mirror symmetry
    for j in 0..=n / 2 {
        out[n - j] = out[j];
    }
    out
}

/// `√C(n, j) / 2^(n/2)` for every `j`: the W-basis coefficients of the
/// uniform superposition. Computed in log space so large `n` neither
/// overflows nor loses the small tails to cancellation.
pub fn binomial_weights(n: usize) -> Vec<f64> {
    let half_ln2 = 0.5 * n as f64 * std::f64::consts::LN_2;
    ln_binomials(n).into_iter().map(|l| (0.5 * l - half_ln2).exp()).collect()
}

fn check_symmetric_register(n: usize) -> Result<()> {
    if n == 0 {
        return input("a register needs at least one qubit");
    }
    if n > MAX_SYMMETRIC_QUBITS {
        return Err(Error::Capacity { what: "symmetric engine", n, max: MAX_SYMMETRIC_QUBITS });
    }
    Ok(())
}

/// State in the span of `|W_0⟩ … |W_N⟩`; `coeffs[j]` multiplies `|W_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct WBasisState {
    n_qubits: usize,
    coeffs: Vec<C64>,
}

impl WBasisState {
    pub fn new(n_qubits: usize, coeffs: Vec<C64>) -> Result<Self> {
        check_symmetric_register(n_qubits)?;
        if coeffs.len() != n_qubits + 1 {
            return input(format!("{} W coefficients given for {} qubits", coeffs.len(), n_qubits));
        }
        Ok(Self { n_qubits, coeffs })
    }

    /// `|W_j⟩`.
    pub fn w(n_qubits: usize, j: usize) -> Result<Self> {
        check_symmetric_register(n_qubits)?;
        if j > n_qubits {
            return input(format!("excitation count {j} exceeds {n_qubits} qubits"));
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); n_qubits + 1];
        coeffs[j] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, coeffs })
    }

    /// `(|W_0⟩ + |W_N⟩)/√2`.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let mut s = Self::w(n_qubits, 0)?;
        s.coeffs[0] = C64::new(FRAC_1_SQRT_2, 0.0);
        s.coeffs[n_qubits] += C64::new(FRAC_1_SQRT_2, 0.0);
        Ok(s)
    }

    /// The uniform superposition `Ry(π/2)^⊗N |0…0⟩`.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        check_symmetric_register(n_qubits)?;
        let coeffs = binomial_weights(n_qubits).into_iter().map(|w| C64::new(w, 0.0)).collect();
        Ok(Self { n_qubits, coeffs })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        dense::norm(&self.coeffs)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOL
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &WBasisState) -> Result<C64> {
        self.check_same(other)?;
        Ok(dense::inner(&self.coeffs, &other.coeffs))
    }

    pub fn distance(&self, other: &WBasisState) -> Result<f64> {
        self.check_same(other)?;
        Ok(dense::distance(&self.coeffs, &other.coeffs))
    }

    pub fn scaled(&self, c: C64) -> WBasisState {
        WBasisState { n_qubits: self.n_qubits, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Frobenius fidelity against another W-basis state.
    pub fn fidelity(&self, target: &WBasisState, align_phase: bool) -> Result<f64> {
        self.check_same(target)?;
        Ok(dense::frobenius_fidelity(&self.coeffs, &target.coeffs, align_phase))
    }

    fn check_same(&self, other: &WBasisState) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return input(format!("W states over {} and {} qubits", self.n_qubits, other.n_qubits));
        }
        Ok(())
    }
}

/// Eigenvalues `λ_j` of the uniform exchange Hamiltonian on `|W_j⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueTable {
    pub n_qubits: usize,
    pub g: f64,
    pub gz: f64,
    pub lambda: Vec<f64>,
}

impl EigenvalueTable {
    /// `λ_0 = C(N, 2) g̃ / 2`, the energy of both GHZ branches.
    pub fn ground(&self) -> f64 {
        self.lambda[0]
    }
}

/// `λ_j = j(N - j)(g - g̃) + C(N, 2) g̃ / 2` for `j = 0..=N`.
pub fn analytic_eigenvalues(n: usize, g: f64, gz: f64) -> Result<EigenvalueTable> {
    if n < 2 {
        return input(format!("eigenvalue table needs n >= 2, got {n}"));
    }
    check_symmetric_register(n)?;
    if !g.is_finite() || !gz.is_finite() {
        return input("couplings must be finite");
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let lambda = (0..=n).map(|j| (j * (n - j)) as f64 * (g - gz) + pairs * gz / 2.0).collect();
    Ok(EigenvalueTable { n_qubits: n, g, gz, lambda })
}

/// Collective operator selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Plus,
    Minus,
    Z,
}

fn raise_coeff(n: usize, j: usize) -> f64 {
    (((n - j) * (j + 1)) as f64).sqrt()
}

/// Apply `Σ+`, `Σ-` or `Σz`; the result is not renormalized.
pub fn ladder_apply(state: &WBasisState, which: Ladder) -> WBasisState {
    let n = state.n_qubits;
    let c = &state.coeffs;
    let mut out = vec![C64::new(0.0, 0.0); n + 1];
    match which {
        Ladder::Plus => {
            for j in 0..n {
                out[j + 1] = c[j] * raise_coeff(n, j);
            }
        }
        Ladder::Minus => {
            for j in 1..=n {
                out[j - 1] = c[j] * raise_coeff(n, j - 1);
            }
        }
        Ladder::Z => {
            for j in 0..=n {
                out[j] = c[j] * (2.0 * j as f64 - n as f64);
            }
        }
    }
    WBasisState { n_qubits: n, coeffs: out }
}

/// Entangling pulse: `coeffs[j] ← e^{-iλ_j t} coeffs[j]`.
pub fn entangle_phases(state: &WBasisState, table: &EigenvalueTable, t: f64) -> Result<WBasisState> {
    if table.n_qubits != state.n_qubits {
        return input(format!(
            "eigenvalue table for {} qubits applied to {}-qubit state",
            table.n_qubits, state.n_qubits
        ));
    }
    let coeffs = state
        .coeffs
        .iter()
        .zip(&table.lambda)
        .map(|(c, l)| c * C64::from_polar(1.0, -l * t))
        .collect();
    Ok(WBasisState { n_qubits: state.n_qubits, coeffs })
}

/// `⊗_k exp(-i angle σ_axis / 2)` (gate frame) restricted to the symmetric
/// subspace.
pub fn collective_rotation(state: &WBasisState, axis: Axis, angle: f64) -> WBasisState {
    let n = state.n_qubits;
    let half = angle / 2.0;
    let coeffs = match axis {
        Axis::Z => state
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * C64::from_polar(1.0, -half * (n as f64 - 2.0 * j as f64)))
            .collect(),
        Axis::X => rotate_x(&state.coeffs, half),
        Axis::Y => {
            // i(Σ+ - Σ-) = D (Σ+ + Σ-) D† with D = diag(i^j)
            let d = |j: usize| match j % 4 {
                0 => C64::new(1.0, 0.0),
                1 => C64::new(0.0, 1.0),
                2 => C64::new(-1.0, 0.0),
                _ => C64::new(0.0, -1.0),
            };
            let twisted: Vec<C64> = state.coeffs.iter().enumerate().map(|(j, c)| c * d(j).conj()).collect();
            rotate_x(&twisted, half).into_iter().enumerate().map(|(j, c)| c * d(j)).collect()
        }
    };
    WBasisState { n_qubits: n, coeffs }
}

/// `exp(-i half (Σ+ + Σ-)) c`, streaming the eigenvectors of the tridiagonal
/// generator so memory stays O(N).
fn rotate_x(c: &[C64], half: f64) -> Vec<C64> {
    let n = c.len() - 1;
    if half == 0.0 {
        return c.to_vec();
    }
    let off: Vec<f64> = (0..n).map(|j| raise_coeff(n, j)).collect();
    let t = SymTridiagonal::new(vec![0.0; n + 1], off);
    let mut out = vec![C64::new(0.0, 0.0); n + 1];
    t.for_each_eigenpair(|mu, v| {
        let proj: C64 = v.iter().zip(c).map(|(a, b)| b * *a).sum();
        let coef = proj * C64::from_polar(1.0, -half * mu);
        for (o, a) in out.iter_mut().zip(v) {
            *o += coef * *a;
        }
    });
    out
}

/// Dense `Σ_j coeffs[j] |W_j⟩`.
pub fn embed(state: &WBasisState) -> Result<StateVector> {
    let n = state.n_qubits;
    if n > dense::MAX_DENSE_QUBITS {
        return Err(Error::Capacity { what: "dense statevector", n, max: dense::MAX_DENSE_QUBITS });
    }
    let inv_sqrt: Vec<f64> = (0..=n).map(|j| binomial(n, j).sqrt().recip()).collect();
    let amps = (0..1usize << n)
        .map(|i| {
            let j = i.count_ones() as usize;
            state.coeffs[j] * inv_sqrt[j]
        })
        .collect();
    StateVector::new(n, amps)
}

/// W-basis coefficients `⟨W_j|ψ⟩` and the norm of the part of `ψ` outside
/// the symmetric subspace.
pub fn project(state: &StateVector) -> (WBasisState, f64) {
    let n = state.n_qubits();
    let amps = state.amplitudes();
    let inv_sqrt: Vec<f64> = (0..=n).map(|j| binomial(n, j).sqrt().recip()).collect();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    for (i, a) in amps.iter().enumerate() {
        coeffs[i.count_ones() as usize] += a;
    }
    for (c, s) in coeffs.iter_mut().zip(&inv_sqrt) {
        *c *= s;
    }
    let residual = amps
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let j = i.count_ones() as usize;
            (a - coeffs[j] * inv_sqrt[j]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    (WBasisState { n_qubits: n, coeffs }, residual)
}

/// Dense `|W_j⟩`.
pub fn w_state_dense(n: usize, j: usize) -> Result<StateVector> {
    if j > n {
        return input(format!("excitation count {j} exceeds {n} qubits"));
    }
    embed(&WBasisState::w(n, j)?)
}

/// Dense `Σ+ = Σ_k S+^k`, `Σ- = Σ_k S-^k` or `Σz = Σ_k σz^k` in the
/// excitation frame.
pub fn collective_dense(n: usize, which: Ladder) -> Result<DenseOperator> {
    let mut acc = DenseOperator::zeros(pauli_on(n, 1, Axis::Z)?.dim());
    for k in 1..=n {
        let term = match which {
            Ladder::Z => pauli_on(n, k, Axis::Z)?,
            Ladder::Plus | Ladder::Minus => {
                let x = pauli_on(n, k, Axis::X)?;
                let y = pauli_on(n, k, Axis::Y)?;
                let s = if which == Ladder::Plus { 0.5 } else { -0.5 };
                &x.scale(C64::new(0.5, 0.0)) + &y.scale(C64::new(0.0, s))
            }
        };
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Dense `X^⊗N`.
pub fn flip_all_dense(n: usize) -> Result<DenseOperator> {
    let mut acc = pauli_on(n, 1, Axis::X)?;
    for k in 2..=n {
        acc = &acc * &pauli_on(n, k, Axis::X)?;
    }
    acc.into_hermitian()
}

/// For each `j`, the eigenvalue of the eigenvector of `h` with the largest
/// overlap with `|W_j⟩`, found by full diagonalization.
pub fn w_sector_eigenvalues(h: &DenseOperator, n: usize) -> Result<Vec<f64>> {
    if h.dim() != 1usize << n {
        return input(format!("operator of dim {} is not an {n}-qubit operator", h.dim()));
    }
    let sd = SpectralDecomposition::new(h)?;
    let ws: Vec<StateVector> = (0..=n).map(|j| w_state_dense(n, j)).collect::<Result<_>>()?;
    let mut best = vec![(f64::NEG_INFINITY, f64::NAN); n + 1];
    for (value, v) in sd.eigenpairs() {
        for (j, w) in ws.iter().enumerate() {
            let ov = dense::inner(w.amplitudes(), &v).norm_sqr();
            if ov > best[j].0 {
                best[j] = (ov, value);
            }
        }
    }
    Ok(best.into_iter().map(|(_, v)| v).collect())
}

/// Dense `(N+1)×(N+1)` matrix of a W-basis operator built column by column
/// from [`ladder_apply`]; used by tests to compare with the dense algebra.
pub fn ladder_matrix(n: usize, which: Ladder) -> Result<DMatrix<C64>> {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        let col = ladder_apply(&WBasisState::w(n, j)?, which);
        for (i, c) in col.coeffs.iter().enumerate() {
            m[(i, j)] = *c;
        }
    }
    Ok(m)
}
