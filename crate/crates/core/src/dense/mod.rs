//! Dense 2^N statevectors, explicit operators and state metrics.
//!
//! Two Pauli frames appear in this crate:
//!
//! * [`pauli_on`] builds operators in the *excitation frame*, where
//!   `σz|0⟩ = -|0⟩`, `σz|1⟩ = |1⟩` and `S+ = (σx + iσy)/2 = |1⟩⟨0|` raises the
//!   excitation number. Collective ladder algebra is written in this frame.
//! * Rotation gates ([`rotation_gate`]) use the usual gate frame:
//!   `R_a(α) = exp(-i α σa / 2)` with `Ry(π/2)|0⟩ = (|0⟩ + |1⟩)/√2`.
//!
//! The two frames are conjugate under `X` on every qubit: σx agrees while σy
//! and σz flip sign. The exchange Hamiltonian only contains products
//! `σa^l σa^k` and is the same operator in both.

mod chebyshev;
mod operator;
mod spectral;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::C64;

pub use chebyshev::{bessel_j_sequence, chebyshev_propagate};
pub use operator::{pauli_on, DenseOperator, MAX_MATRIX_QUBITS};
pub(crate) use operator::{check_matrix_register, pauli_action};
pub use spectral::{evolve, SpectralDecomposition};

/// Largest register held as a dense statevector.
pub const MAX_DENSE_QUBITS: usize = 14;

/// Tolerance for "is normalized" / "is unit modulus" checks.
pub const UNIT_TOL: f64 = 1e-12;

/// Rotation or Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        f.write_str(s)
    }
}

/// Bit mask of qubit `k` (1-based) inside a basis index.
#[inline]
pub fn qubit_mask(k: usize) -> usize {
    1 << (k - 1)
}

/// Qubit-order bitstring `ξ1 ξ2 … ξN` of a basis index.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (1..=n_qubits)
        .map(|k| if index & qubit_mask(k) != 0 { '1' } else { '0' })
        .collect()
}

/// Dense amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        check_register(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return input(format!(
                "{} amplitudes given for {} qubits (expected {})",
                amps.len(),
                n_qubits,
                1usize << n_qubits
            ));
        }
        Ok(Self { n_qubits, amps })
    }

    /// `|0…0⟩`.
    pub fn ground(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOL
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same_dim(other)?;
        Ok(inner(&self.amps, &other.amps))
    }

    pub fn scaled(&self, c: C64) -> StateVector {
        StateVector {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean distance `‖self - other‖₂`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(distance(&self.amps, &other.amps))
    }

    /// Apply a 2×2 matrix (row-major, `m[out][in]`) to qubit `k`.
    pub fn apply_single(&mut self, k: usize, m: &[[C64; 2]; 2]) -> Result<()> {
        if k == 0 || k > self.n_qubits {
            return input(format!("qubit {k} out of range 1..={}", self.n_qubits));
        }
        let mask = qubit_mask(k);
        for i0 in 0..self.amps.len() {
            if i0 & mask != 0 {
                continue;
            }
            let i1 = i0 | mask;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    /// Gate-frame rotation `exp(-i angle σ_axis / 2)` on qubit `k`.
    pub fn rotate(&mut self, k: usize, axis: Axis, angle: f64) -> Result<()> {
        self.apply_single(k, &rotation_gate(axis, angle))
    }

    /// The same rotation on every qubit.
    pub fn rotate_all(&mut self, axis: Axis, angle: f64) {
        let gate = rotation_gate(axis, angle);
        for k in 1..=self.n_qubits {
            self.apply_single(k, &gate).expect("qubit index in range");
        }
    }

    fn check_same_dim(&self, other: &StateVector) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return input(format!(
                "dimension mismatch: {} vs {} qubits",
                self.n_qubits, other.n_qubits
            ));
        }
        Ok(())
    }
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return input("a register needs at least one qubit");
    }
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            what: "dense statevector",
            n: n_qubits,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

/// Computational basis state `|ξ1 … ξN⟩`; `bits[k-1]` is qubit `k`.
pub fn basis_state(n_qubits: usize, bits: &[u8]) -> Result<StateVector> {
    if bits.len() != n_qubits {
        return input(format!("{} bits given for {} qubits", bits.len(), n_qubits));
    }
    let mut index = 0;
    for (k, &b) in bits.iter().enumerate() {
        match b {
            0 => {}
            1 => index |= qubit_mask(k + 1),
            _ => return input(format!("bit value {b} is not 0 or 1")),
        }
    }
    let mut psi = StateVector::new(n_qubits, vec![C64::new(0.0, 0.0); 1 << n_qubits])?;
    psi.amps[index] = C64::new(1.0, 0.0);
    Ok(psi)
}

/// [`basis_state`] from a `"0101"`-style string in qubit order.
pub fn basis_state_str(n_qubits: usize, bits: &str) -> Result<StateVector> {
    let parsed: Result<Vec<u8>> = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => input(format!("invalid bit character {other:?}")),
        })
        .collect();
    basis_state(n_qubits, &parsed?)
}

/// Gate-frame rotation matrix `exp(-i angle σ_axis / 2)`, row-major.
pub fn rotation_gate(axis: Axis, angle: f64) -> [[C64; 2]; 2] {
    let (s, c) = (angle / 2.0).sin_cos();
    let z = C64::new(0.0, 0.0);
    match axis {
        Axis::X => [
            [C64::new(c, 0.0), C64::new(0.0, -s)],
            [C64::new(0.0, -s), C64::new(c, 0.0)],
        ],
        Axis::Y => [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]],
        Axis::Z => [[C64::new(c, -s), z], [z, C64::new(c, s)]],
    }
}

/// A unit-modulus complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhaseRepr", into = "PhaseRepr")]
pub struct GlobalPhase(C64);

#[derive(Serialize, Deserialize)]
struct PhaseRepr {
    re: f64,
    im: f64,
}

impl TryFrom<PhaseRepr> for GlobalPhase {
    type Error = Error;
    fn try_from(r: PhaseRepr) -> Result<Self> {
        GlobalPhase::new(C64::new(r.re, r.im))
    }
}

impl From<GlobalPhase> for PhaseRepr {
    fn from(p: GlobalPhase) -> Self {
        PhaseRepr { re: p.0.re, im: p.0.im }
    }
}

impl GlobalPhase {
    pub fn new(value: C64) -> Result<Self> {
        if (value.norm() - 1.0).abs() > UNIT_TOL {
            return input(format!("phase {value} does not have unit modulus"));
        }
        Ok(Self(value))
    }

    /// `e^{i angle}`.
    pub fn from_angle(angle: f64) -> Self {
        Self(C64::from_polar(1.0, angle))
    }

    pub fn one() -> Self {
        Self(C64::new(1.0, 0.0))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    /// Argument in `(-π, π]`.
    pub fn angle(&self) -> f64 {
        self.0.arg()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &GlobalPhase) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl std::ops::Mul for GlobalPhase {
    type Output = GlobalPhase;
    fn mul(self, rhs: GlobalPhase) -> GlobalPhase {
        // renormalize so long products stay on the unit circle
        let v = self.0 * rhs.0;
        GlobalPhase(v / v.norm())
    }
}

impl fmt::Display for GlobalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(i*{:.6})", self.angle())
    }
}

/// `1 - ‖ψ' - target‖₂`, where `ψ'` is `psi` itself or, with `align_phase`,
/// `psi` times the phase that makes `⟨target|ψ'⟩` real and nonnegative.
pub fn fidelity_frobenius(psi: &StateVector, target: &StateVector, align_phase: bool) -> Result<f64> {
    psi.check_same_dim(target)?;
    Ok(frobenius_fidelity(psi.amplitudes(), target.amplitudes(), align_phase))
}

/// Unit phase `φ` with `a ≈ φ·b`.
pub fn global_phase_between(a: &StateVector, b: &StateVector) -> Result<GlobalPhase> {
    a.check_same_dim(b)?;
    phase_between(a.amplitudes(), b.amplitudes())
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn frobenius_fidelity(psi: &[C64], target: &[C64], align_phase: bool) -> f64 {
    if !align_phase {
        return 1.0 - distance(psi, target);
    }
    let overlap = inner(target, psi);
    let r = overlap.norm();
    let rot = if r > 0.0 { overlap.conj() / r } else { C64::new(1.0, 0.0) };
    let d = psi
        .iter()
        .zip(target)
        .map(|(p, t)| (p * rot - t).norm_sqr())
        .sum::<f64>()
        .sqrt();
    1.0 - d
}

/// Phase tolerance used by [`global_phase_between`].
pub const PHASE_TOL: f64 = 1e-6;

pub(crate) fn phase_between(a: &[C64], b: &[C64]) -> Result<GlobalPhase> {
    let overlap = inner(b, a);
    let r = overlap.norm();
    let scale = norm(a) * norm(b);
    if scale == 0.0 || r < scale * (1.0 - PHASE_TOL) {
        return Err(Error::NoPhase {
            overlap: if scale > 0.0 { r / scale } else { 0.0 },
        });
    }
    let phase = overlap / r;
    let residual = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > PHASE_TOL {
        return Err(Error::NoPhase { overlap: r / scale });
    }
    Ok(GlobalPhase(phase))
}

/// `(|0…0⟩ + |1…1⟩)/√2` as raw amplitudes.
pub(crate) fn ghz_amplitudes(n_qubits: usize) -> Vec<C64> {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[(1 << n_qubits) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps
}
