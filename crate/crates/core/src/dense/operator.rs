use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use super::{qubit_mask, Axis, StateVector, UNIT_TOL};
use crate::error::{input, Error, Result};
use crate::C64;

/// Largest register for which explicit 2^N × 2^N matrices are built.
pub const MAX_MATRIX_QUBITS: usize = 10;

/// Explicit square complex matrix, optionally flagged Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<C64>,
    hermitian: bool,
}

impl DenseOperator {
    /// Wrap a matrix. With `hermitian` set the matrix is checked against its
    /// adjoint to [`UNIT_TOL`].
    pub fn new(matrix: DMatrix<C64>, hermitian: bool) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return input(format!("operator must be square and nonempty, got {}x{}", matrix.nrows(), matrix.ncols()));
        }
        let op = Self { matrix, hermitian: false };
        if hermitian {
            op.into_hermitian()
        } else {
            Ok(op)
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim), hermitian: true }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: DMatrix::zeros(dim, dim), hermitian: true }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max |M - M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Set the Hermitian flag after checking `max |M - M†| ≤ 1e-12`.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let defect = self.hermiticity_defect();
        if defect > UNIT_TOL {
            return Err(Error::Contract(format!("operator is not Hermitian (max |M - M†| = {defect:.3e})")));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), hermitian: self.hermitian }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { matrix: &self.matrix * c, hermitian: self.hermitian && c.im == 0.0 }
    }

    /// `self^k`, with `self^0 = I`.
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out.hermitian = self.hermitian;
        out
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        &(a * b) - &(b * a)
    }

    /// Entrywise `max |self - other|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operator dimensions differ");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim() {
            return input(format!("operator of dim {} applied to state of dim {}", self.dim(), state.dim()));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (j, a) in state.amplitudes().iter().enumerate() {
            if *a == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.matrix[(i, j)] * a;
            }
        }
        StateVector::new(state.n_qubits(), out)
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { matrix: &self.matrix + &rhs.matrix, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { matrix: &self.matrix - &rhs.matrix, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { matrix: &self.matrix * &rhs.matrix, hermitian: false }
    }
}

/// Excitation-frame Pauli action on one bit: returns the new bit and the
/// amplitude factor.
pub(crate) fn pauli_action(axis: Axis, bit: bool) -> (bool, C64) {
    match (axis, bit) {
        (Axis::X, b) => (!b, C64::new(1.0, 0.0)),
        (Axis::Y, false) => (true, C64::new(0.0, -1.0)),
        (Axis::Y, true) => (false, C64::new(0.0, 1.0)),
        (Axis::Z, false) => (false, C64::new(-1.0, 0.0)),
        (Axis::Z, true) => (true, C64::new(1.0, 0.0)),
    }
}

pub(crate) fn check_matrix_register(n: usize) -> Result<()> {
    if n == 0 {
        return input("a register needs at least one qubit");
    }
    if n > MAX_MATRIX_QUBITS {
        return Err(Error::Capacity { what: "explicit operator", n, max: MAX_MATRIX_QUBITS });
    }
    Ok(())
}

/// `σ_axis` on qubit `k` of an `n`-qubit register (excitation frame:
/// `σz|0⟩ = -|0⟩`).
pub fn pauli_on(n: usize, k: usize, axis: Axis) -> Result<DenseOperator> {
    check_matrix_register(n)?;
    if k == 0 || k > n {
        return input(format!("qubit {k} out of range 1..={n}"));
    }
    let dim = 1 << n;
    let mask = qubit_mask(k);
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let (bit, amp) = pauli_action(axis, col & mask != 0);
        let row = if bit { col | mask } else { col & !mask };
        m[(row, col)] = amp;
    }
    Ok(DenseOperator { matrix: m, hermitian: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::basis_state_str;

    const I: C64 = C64::new(0.0, 1.0);

    #[test]
    fn sigma_z_is_negative_on_ground() {
        let z = pauli_on(1, 1, Axis::Z).unwrap();
        let out = z.apply(&basis_state_str(1, "0").unwrap()).unwrap();
        assert_eq!(out.amplitudes(), &[C64::new(-1.0, 0.0), C64::new(0.0, 0.0)]);
    }

    #[test]
    fn sigma_x_flips_addressed_qubit() {
        let x = pauli_on(2, 1, Axis::X).unwrap();
        let out = x.apply(&basis_state_str(2, "00").unwrap()).unwrap();
        assert_eq!(out, basis_state_str(2, "10").unwrap());
    }

    #[test]
    fn paulis_are_involutions() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let p = pauli_on(3, 2, axis).unwrap();
            assert_eq!((&p * &p).max_abs_diff(&DenseOperator::identity(8)), 0.0);
        }
    }

    #[test]
    fn pauli_algebra_same_qubit() {
        let n = 3;
        for k in 1..=n {
            let x = pauli_on(n, k, Axis::X).unwrap();
            let y = pauli_on(n, k, Axis::Y).unwrap();
            let z = pauli_on(n, k, Axis::Z).unwrap();
            assert_eq!((&x * &y).max_abs_diff(&z.scale(I)), 0.0);
            assert_eq!((&y * &z).max_abs_diff(&x.scale(I)), 0.0);
            assert_eq!((&z * &x).max_abs_diff(&y.scale(I)), 0.0);
        }
    }

    #[test]
    fn paulis_on_distinct_qubits_commute() {
        let n = 3;
        for a in [Axis::X, Axis::Y, Axis::Z] {
            for b in [Axis::X, Axis::Y, Axis::Z] {
                let p = pauli_on(n, 1, a).unwrap();
                let q = pauli_on(n, 3, b).unwrap();
                assert!(DenseOperator::commutator(&p, &q).max_abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn raising_operator_excites() {
        // S+ = (σx + iσy)/2 maps |0⟩ to |1⟩ in this frame
        let x = pauli_on(1, 1, Axis::X).unwrap();
        let y = pauli_on(1, 1, Axis::Y).unwrap();
        let sp = (&x + &y.scale(I)).scale(C64::new(0.5, 0.0));
        let out = sp.apply(&basis_state_str(1, "0").unwrap()).unwrap();
        assert_eq!(out, basis_state_str(1, "1").unwrap());
    }

    #[test]
    fn pauli_on_validates_inputs() {
        assert!(matches!(pauli_on(3, 0, Axis::X), Err(Error::Input(_))));
        assert!(matches!(pauli_on(3, 4, Axis::X), Err(Error::Input(_))));
        assert!(matches!(pauli_on(11, 1, Axis::X), Err(Error::Capacity { .. })));
    }

    #[test]
    fn hermitian_flag_is_checked() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(DenseOperator::new(m.clone(), true), Err(Error::Contract(_))));
        m[(1, 0)] = C64::new(1.0, 0.0);
        assert!(DenseOperator::new(m, true).unwrap().is_hermitian());
    }
}
