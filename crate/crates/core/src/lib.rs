//! Single-pulse GHZ state generation on fully connected qubit networks.
//!
//! The network Hamiltonian is the anisotropic Heisenberg exchange
//!
//! ```text
//! H = 1/2 Σ_{l<k} [ g_lk (σx^l σx^k + σy^l σy^k) + g̃_lk σz^l σz^k ]
//! ```
//!
//! on the complete graph. With identical couplings a single entangling pulse
//! of duration `π / 2|g - g̃|`, sandwiched between collective π/2 rotations,
//! turns `|0…0⟩` into `(|0…0⟩ + |1…1⟩)/√2` for every `N`.
//!
//! The crate is organized as
//!
//! * [`dense`]: 2^N statevectors, explicit operators, exact evolution and
//!   state metrics.
//! * [`symmetric`]: the (N+1)-dimensional engine over generalized W states
//!   (ladder operators, analytic spectrum, collective rotations).
//! * [`hamiltonians`]: ideal and imperfect coupling graphs.
//! * [`protocol`]: compile/execute/verify the odd-N and even-N pulse sequences.
//! * [`optimizer`]: recover fidelity lost to coupling imperfections by
//!   re-tuning the entangling time and final rotations.
//!
//! # Qubit ordering
//!
//! Qubit `k` (1-based) is bit `k - 1` of a basis index, so `|ξ1 ξ2 … ξN⟩` has
//! index `Σ ξk 2^(k-1)`. Bitstrings are always written in qubit order
//! `ξ1 ξ2 … ξN`.

pub mod dense;
mod error;
pub mod hamiltonians;
pub mod optimizer;
pub mod protocol;
pub mod symmetric;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
