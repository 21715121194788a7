use thiserror::Error;

/// Errors produced by the simulator, protocol compiler and optimizer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),

    /// An operation was handed an operator that does not satisfy its contract,
    /// e.g. a non-Hermitian generator passed to `evolve`.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Two states were expected to agree up to a global phase but do not.
    #[error("states are not equal up to a global phase (overlap modulus {overlap:.3e})")]
    NoPhase { overlap: f64 },

    /// `g == gz`: the uniform superposition is stationary and no entangling
    /// time exists.
    #[error("degenerate couplings g = gz = {g}: the uniform superposition is an eigenstate")]
    DegenerateCoupling { g: f64 },

    /// The requested system is too large for the chosen representation.
    #[error("{what} supports at most {max} qubits, got {n}")]
    Capacity { what: &'static str, n: usize, max: usize },

    /// The chosen engine cannot execute the plan on the given graph.
    #[error("engine cannot run this plan: {0}")]
    EngineCapability(String),

    /// A numerical routine failed (non-finite values, breakdown).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
