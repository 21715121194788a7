//! Run configuration, read from a TOML document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use ghznet::hamiltonians::{ideal, perturbed_general, CouplingGraph, ZzScaling};
use ghznet::optimizer::{multipliers_with_defaults, Family, OptimizerConfig, SweepSpec};
use ghznet::protocol::Engine;

use crate::error::CliError;

/// One XY imperfection: the `(a, b)` coupling becomes `g (1 - eta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Imperfection {
    pub a: usize,
    pub b: usize,
    pub eta: f64,
}

/// Deviation from the ideal all-to-all graph.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Perturbation {
    /// ZZ reference as a fraction of `g`; overrides the top-level `gz`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    pub zz: ZzScaling,
    /// Pairs not listed keep the reference coupling.
    pub eta: Vec<Imperfection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n_qubits: usize,
    pub g: f64,
    pub gz: f64,
    pub engine: Engine,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// State-vector CSV of `optimize`; defaults to `<out stem>_state.csv`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_out: Option<PathBuf>,
    /// Reference XY coupling `g/2π` in MHz, used to print times in ns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
    pub optimizer: OptimizerConfig,
    pub sweep: SweepSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_qubits: 3,
            g: 1.0,
            gz: 0.0,
            engine: Engine::Dense,
            out: None,
            state_out: None,
            report_mhz: None,
            family: None,
            perturbation: None,
            optimizer: OptimizerConfig::default(),
            sweep: SweepSpec::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// ZZ reference coupling after applying `kappa`.
    pub fn gz_ref(&self) -> f64 {
        match self.perturbation.as_ref().and_then(|p| p.kappa) {
            Some(k) => k * self.g,
            None => self.gz,
        }
    }

    pub fn family(&self) -> Family {
        self.family.unwrap_or_else(|| Family::default_for(self.n_qubits))
    }

    /// The coupling graph described by this run.
    pub fn graph(&self) -> Result<CouplingGraph, CliError> {
        let Some(p) = &self.perturbation else {
            return Ok(ideal(self.n_qubits, self.g, self.gz)?);
        };
        let mut given = Vec::with_capacity(p.eta.len());
        for e in &p.eta {
            let ok = (1..=self.n_qubits).contains(&e.a) && (1..=self.n_qubits).contains(&e.b) && e.a != e.b;
            if !ok {
                return Err(CliError::Config(format!("imperfection pair ({}, {}) is not a pair of distinct qubits", e.a, e.b)));
            }
            given.push((e.a, e.b, 1.0 - e.eta));
        }
        let multipliers = multipliers_with_defaults(self.n_qubits, &given);
        Ok(perturbed_general(self.n_qubits, self.g, self.gz_ref(), &multipliers, p.zz)?)
    }
}
