use nalgebra::{DMatrix, SymmetricEigen};

use super::{DenseOperator, StateVector};
use crate::error::{input, Error, Result};
use crate::C64;

/// Eigendecomposition of a Hermitian operator, split into the invariant
/// blocks given by the connected components of its sparsity pattern.
///
/// Exchange Hamiltonians conserve the excitation number, so their blocks are
/// the excitation sectors and an N = 10 operator never needs more than a
/// 252 × 252 diagonalization.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    dim: usize,
    blocks: Vec<Block>,
}

#[derive(Debug, Clone)]
struct Block {
    indices: Vec<usize>,
    values: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl SpectralDecomposition {
    pub fn new(h: &DenseOperator) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(Error::Contract("spectral decomposition needs a Hermitian operator".into()));
        }
        let dim = h.dim();
        let m = h.matrix();
        let mut blocks = Vec::new();
        for indices in components(m) {
            let k = indices.len();
            let sub = DMatrix::from_fn(k, k, |r, c| m[(indices[r], indices[c])]);
            let eig = SymmetricEigen::try_new(sub, f64::EPSILON, 0)
                .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
            blocks.push(Block { indices, values: eig.eigenvalues.iter().copied().collect(), vectors: eig.eigenvectors });
        }
        Ok(Self { dim, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks.iter().flat_map(|b| b.values.iter().copied()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Eigenpairs as (value, dense eigenvector).
    pub fn eigenpairs(&self) -> impl Iterator<Item = (f64, Vec<C64>)> + '_ {
        self.blocks.iter().flat_map(move |b| {
            (0..b.values.len()).map(move |c| {
                let mut v = vec![C64::new(0.0, 0.0); self.dim];
                for (r, &i) in b.indices.iter().enumerate() {
                    v[i] = b.vectors[(r, c)];
                }
                (b.values[c], v)
            })
        })
    }

    /// `e^{-iHt}` applied to raw amplitudes.
    pub fn evolve_amplitudes(&self, amps: &[C64], t: f64) -> Vec<C64> {
        assert_eq!(amps.len(), self.dim, "state dimension mismatch");
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for b in &self.blocks {
            let k = b.indices.len();
            for c in 0..k {
                let mut proj = C64::new(0.0, 0.0);
                for (r, &i) in b.indices.iter().enumerate() {
                    proj += b.vectors[(r, c)].conj() * amps[i];
                }
                if proj == C64::new(0.0, 0.0) {
                    continue;
                }
                let coeff = proj * C64::from_polar(1.0, -b.values[c] * t);
                for (r, &i) in b.indices.iter().enumerate() {
                    out[i] += b.vectors[(r, c)] * coeff;
                }
            }
        }
        out
    }

    pub fn evolve(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        if state.dim() != self.dim {
            return input(format!("state of dim {} evolved under operator of dim {}", state.dim(), self.dim));
        }
        StateVector::new(state.n_qubits(), self.evolve_amplitudes(state.amplitudes(), t))
    }
}

/// `e^{-iht}|state⟩` by eigendecomposition of `h`.
pub fn evolve(state: &StateVector, h: &DenseOperator, t: f64) -> Result<StateVector> {
    SpectralDecomposition::new(h)?.evolve(state, t)
}

/// Connected components of the graph with an edge wherever `m[(i, j)] != 0`.
fn components(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)] != C64::new(0.0, 0.0) || m[(j, i)] != C64::new(0.0, 0.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{basis_state_str, pauli_on, Axis};

    #[test]
    fn zero_time_is_identity() {
        let h = &pauli_on(2, 1, Axis::X).unwrap() + &pauli_on(2, 2, Axis::Z).unwrap();
        let psi = basis_state_str(2, "01").unwrap();
        let out = evolve(&psi, &h, 0.0).unwrap();
        assert!(out.distance(&psi).unwrap() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let x = pauli_on(1, 1, Axis::X).unwrap();
        let y = pauli_on(1, 1, Axis::Y).unwrap();
        let xy = &x * &y;
        let psi = basis_state_str(1, "0").unwrap();
        assert!(matches!(evolve(&psi, &xy, 1.0), Err(Error::Contract(_))));
    }

    #[test]
    fn single_qubit_precession() {
        // e^{-i t σx}|0⟩ = cos t |0⟩ - i sin t |1⟩
        let x = pauli_on(1, 1, Axis::X).unwrap();
        let t = 0.37;
        let out = evolve(&basis_state_str(1, "0").unwrap(), &x, t).unwrap();
        assert!((out.amplitudes()[0] - C64::new(t.cos(), 0.0)).norm() < 1e-14);
        assert!((out.amplitudes()[1] - C64::new(0.0, -t.sin())).norm() < 1e-14);
    }

    #[test]
    fn block_split_matches_spectrum() {
        let z = &pauli_on(3, 1, Axis::Z).unwrap() + &pauli_on(3, 3, Axis::Z).unwrap();
        let sd = SpectralDecomposition::new(&z).unwrap();
        assert_eq!(sd.blocks.len(), 8);
        assert_eq!(sd.eigenvalues(), vec![-2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0]);
    }
}
