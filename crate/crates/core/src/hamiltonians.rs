//! Coupling graphs on the complete graph and the exchange Hamiltonians they
//! define.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dense::{self, check_matrix_register, pauli_action, qubit_mask, Axis, DenseOperator, StateVector};
use crate::error::{input, Error, Result};
use crate::C64;

/// XY and ZZ strengths of one pair `(a, b)`, `1 ≤ a < b ≤ N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCoupling {
    pub a: usize,
    pub b: usize,
    pub xy: f64,
    pub zz: f64,
}

/// How ZZ couplings follow XY imperfections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZzScaling {
    /// Every pair carries `gz_ref`.
    Uniform,
    /// Each pair carries `gz_ref` times its XY multiplier, so `g̃/g` is the
    /// same ratio on every bond.
    #[default]
    ProportionalToXy,
}

/// Per-pair couplings of the complete graph on `n_qubits` qubits. Pairs are
/// stored in lexicographic order `(1,2), (1,3), …, (N-1,N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct CouplingGraph {
    n_qubits: usize,
    couplings: Vec<PairCoupling>,
    g_ref: f64,
    gz_ref: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    n_qubits: usize,
    g_ref: f64,
    gz_ref: f64,
    couplings: Vec<PairCoupling>,
}

impl TryFrom<RawGraph> for CouplingGraph {
    type Error = Error;
    fn try_from(r: RawGraph) -> Result<Self> {
        CouplingGraph::from_pairs(r.n_qubits, r.g_ref, r.gz_ref, r.couplings)
    }
}

impl From<CouplingGraph> for RawGraph {
    fn from(g: CouplingGraph) -> Self {
        RawGraph { n_qubits: g.n_qubits, g_ref: g.g_ref, gz_ref: g.gz_ref, couplings: g.couplings }
    }
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    // pairs (a, ·) start after Σ_{i<a} (N - i)
    (a - 1) * (2 * n - a) / 2 + (b - a - 1)
}

fn check_coupling(v: f64, what: &str) -> Result<()> {
    if !v.is_finite() {
        return input(format!("{what} coupling must be finite, got {v}"));
    }
    Ok(())
}

impl CouplingGraph {
    /// Validate and order an explicit pair list; every pair must appear once.
    pub fn from_pairs(n_qubits: usize, g_ref: f64, gz_ref: f64, pairs: Vec<PairCoupling>) -> Result<Self> {
        if n_qubits < 2 {
            return input(format!("a coupling graph needs n >= 2, got {n_qubits}"));
        }
        check_coupling(g_ref, "reference XY")?;
        check_coupling(gz_ref, "reference ZZ")?;
        let count = n_qubits * (n_qubits - 1) / 2;
        let mut slots: Vec<Option<PairCoupling>> = vec![None; count];
        for p in pairs {
            let (a, b) = (p.a.min(p.b), p.a.max(p.b));
            if a == 0 || b > n_qubits || a == b {
                return input(format!("invalid pair ({}, {}) for {n_qubits} qubits", p.a, p.b));
            }
            check_coupling(p.xy, "XY")?;
            check_coupling(p.zz, "ZZ")?;
            let slot = &mut slots[pair_index(n_qubits, a, b)];
            if slot.is_some() {
                return input(format!("pair ({a}, {b}) listed twice"));
            }
            *slot = Some(PairCoupling { a, b, ..p });
        }
        let couplings = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or(i))
            .collect::<std::result::Result<Vec<_>, usize>>()
            .map_err(|_| Error::Input(format!("graph must list all {count} pairs")))?;
        Ok(Self { n_qubits, couplings, g_ref, gz_ref })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn couplings(&self) -> &[PairCoupling] {
        &self.couplings
    }

    pub fn g_ref(&self) -> f64 {
        self.g_ref
    }

    pub fn gz_ref(&self) -> f64 {
        self.gz_ref
    }

    /// Coupling of pair `(a, b)` in either order.
    pub fn pair(&self, a: usize, b: usize) -> Option<&PairCoupling> {
        let (a, b) = (a.min(b), a.max(b));
        if a == 0 || b > self.n_qubits || a == b {
            return None;
        }
        self.couplings.get(pair_index(self.n_qubits, a, b))
    }

    /// Every pair at exactly the reference couplings.
    pub fn is_ideal(&self) -> bool {
        self.couplings.iter().all(|p| p.xy == self.g_ref && p.zz == self.gz_ref)
    }

    /// Sum of two graphs on the same register, pair by pair.
    pub fn combined(&self, other: &CouplingGraph) -> Result<CouplingGraph> {
        if self.n_qubits != other.n_qubits {
            return input("graphs on different registers");
        }
        let couplings = self
            .couplings
            .iter()
            .zip(&other.couplings)
            .map(|(p, q)| PairCoupling { xy: p.xy + q.xy, zz: p.zz + q.zz, ..*p })
            .collect();
        Ok(CouplingGraph {
            n_qubits: self.n_qubits,
            couplings,
            g_ref: self.g_ref + other.g_ref,
            gz_ref: self.gz_ref + other.gz_ref,
        })
    }

    /// Explicit `2^N × 2^N` Hamiltonian built from its Pauli monomials.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        let n = self.n_qubits;
        check_matrix_register(n)?;
        let dim = 1usize << n;
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for p in &self.couplings {
            let (ma, mb) = (qubit_mask(p.a), qubit_mask(p.b));
            for (axis, strength) in [(Axis::X, p.xy), (Axis::Y, p.xy), (Axis::Z, p.zz)] {
                if strength == 0.0 {
                    continue;
                }
                for col in 0..dim {
                    let (bit_a, amp_a) = pauli_action(axis, col & ma != 0);
                    let (bit_b, amp_b) = pauli_action(axis, col & mb != 0);
                    let mut row = col & !(ma | mb);
                    if bit_a {
                        row |= ma;
                    }
                    if bit_b {
                        row |= mb;
                    }
                    m[(row, col)] += amp_a * amp_b * (0.5 * strength);
                }
            }
        }
        DenseOperator::new(m, true)
    }

    /// Matrix-free form of the Hamiltonian for dense statevectors.
    pub fn exchange_operator(&self) -> Result<ExchangeOperator> {
        let n = self.n_qubits;
        if n > dense::MAX_DENSE_QUBITS {
            return Err(Error::Capacity { what: "dense statevector", n, max: dense::MAX_DENSE_QUBITS });
        }
        let dim = 1usize << n;
        let mut diag = vec![0.0; dim];
        let mut flips = Vec::with_capacity(self.couplings.len());
        for p in &self.couplings {
            let (ma, mb) = (qubit_mask(p.a), qubit_mask(p.b));
            let half = 0.5 * p.zz;
            for (i, d) in diag.iter_mut().enumerate() {
                let aligned = (i & ma == 0) == (i & mb == 0);
                *d += if aligned { half } else { -half };
            }
            if p.xy != 0.0 {
                flips.push((ma, mb, p.xy));
            }
        }
        Ok(ExchangeOperator { n_qubits: n, diag, flips })
    }

    /// `e^{-iHt}|state⟩` by Chebyshev propagation with Gershgorin bounds.
    pub fn propagate(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return input(format!(
                "{}-qubit state evolved under a {}-qubit graph",
                state.n_qubits(),
                self.n_qubits
            ));
        }
        self.exchange_operator()?.propagate(state, t)
    }
}

/// Diagonal ZZ part plus XY flip-flop terms of an exchange Hamiltonian.
#[derive(Debug, Clone)]
pub struct ExchangeOperator {
    n_qubits: usize,
    diag: Vec<f64>,
    flips: Vec<(usize, usize, f64)>,
}

impl ExchangeOperator {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `out = H v`.
    pub fn apply(&self, v: &[C64], out: &mut [C64]) {
        for ((o, x), d) in out.iter_mut().zip(v).zip(&self.diag) {
            *o = x * *d;
        }
        for &(ma, mb, xy) in &self.flips {
            let m = ma | mb;
            for (i, o) in out.iter_mut().enumerate() {
                if (i & ma == 0) != (i & mb == 0) {
                    *o += v[i ^ m] * xy;
                }
            }
        }
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, d) in self.diag.iter().enumerate() {
            let r: f64 = self
                .flips
                .iter()
                .filter(|(ma, mb, _)| (i & ma == 0) != (i & mb == 0))
                .map(|(_, _, xy)| xy.abs())
                .sum();
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    pub fn propagate(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return input("state and operator registers differ");
        }
        let amps = dense::chebyshev_propagate(|v, o| self.apply(v, o), self.spectral_bounds(), state.amplitudes(), t)?;
        StateVector::new(self.n_qubits, amps)
    }
}

/// Uniform couplings `g`, `gz` on every pair.
pub fn ideal(n: usize, g: f64, gz: f64) -> Result<CouplingGraph> {
    if n < 2 {
        return input(format!("a coupling graph needs n >= 2, got {n}"));
    }
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for a in 1..n {
        for b in a + 1..=n {
            pairs.push(PairCoupling { a, b, xy: g, zz: gz });
        }
    }
    CouplingGraph::from_pairs(n, g, gz, pairs)
}

/// Three-qubit graph with XY couplings `g12`, `g12(1 - η23)`, `g12(1 - η13)`
/// and ZZ strength `κ g12` scaled according to `zz`.
pub fn perturbed_n3(g12: f64, eta23: f64, eta13: f64, kappa: f64, zz: ZzScaling) -> Result<CouplingGraph> {
    if !(g12 > 0.0) || !g12.is_finite() {
        return input(format!("reference coupling g12 must be positive, got {g12}"));
    }
    if !(eta23 >= 0.0 && eta13 >= 0.0) {
        return input(format!("imperfections must be nonnegative, got η23 = {eta23}, η13 = {eta13}"));
    }
    let multipliers = BTreeMap::from([((1, 2), 1.0), ((2, 3), 1.0 - eta23), ((1, 3), 1.0 - eta13)]);
    perturbed_general(3, g12, kappa * g12, &multipliers, zz)
}

/// XY coupling `g_ref · multiplier(a, b)` on every pair; ZZ per `zz`.
/// `multipliers` must hold every pair `(a, b)` with `a < b`.
pub fn perturbed_general(
    n: usize,
    g_ref: f64,
    gz_ref: f64,
    multipliers: &BTreeMap<(usize, usize), f64>,
    zz: ZzScaling,
) -> Result<CouplingGraph> {
    if n < 2 {
        return input(format!("a coupling graph needs n >= 2, got {n}"));
    }
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for a in 1..n {
        for b in a + 1..=n {
            let m = *multipliers
                .get(&(a, b))
                .ok_or_else(|| Error::Input(format!("missing multiplier for pair ({a}, {b})")))?;
            if !(m > 0.0 && m <= 2.0) {
                return input(format!("multiplier for pair ({a}, {b}) must lie in (0, 2], got {m}"));
            }
            let zz_pair = match zz {
                ZzScaling::Uniform => gz_ref,
                ZzScaling::ProportionalToXy => gz_ref * m,
            };
            pairs.push(PairCoupling { a, b, xy: g_ref * m, zz: zz_pair });
        }
    }
    if multipliers.len() != pairs.len() {
        return input(format!("{} multipliers given for {} pairs", multipliers.len(), pairs.len()));
    }
    CouplingGraph::from_pairs(n, g_ref, gz_ref, pairs)
}

/// Complete-graph capacitance equivalent to a star of `n` qubits on a common
/// island: `C_Δ = C★ / N`.
pub fn star_to_delta(c_star: f64, n: usize) -> Result<f64> {
    if !(c_star > 0.0) || !c_star.is_finite() {
        return input(format!("capacitance must be positive, got {c_star}"));
    }
    if n < 2 {
        return input(format!("star-delta needs n >= 2, got {n}"));
    }
    Ok(c_star / n as f64)
}
