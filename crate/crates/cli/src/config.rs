//! Configuration documents.

use std::collections::BTreeMap;

use qrl_core::lattice::{CurveConfig, DegreeVector, LatticeError};
use qrl_core::rational::{serde_q_vec, Q};
use qrl_core::reps::{SolverOptions, StabilityBudget};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub name: String,
    pub chi: i64,
    pub h0deg: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(#[serde(with = "serde_q_vec")] pub Vec<Q>);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Target for `‖μ‖_F`.
    pub residual: f64,
    /// Relative singular-value cutoff.
    pub rank: f64,
    /// Invariance-defect threshold in the stability search.
    pub defect: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { residual: 1e-12, rank: 1e-8, defect: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Seeds {
    pub default: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self { default: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    pub probes: usize,
    pub restarts: usize,
    pub max_iter: usize,
    pub trials: usize,
    pub samples: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { probes: 4, restarts: 5, max_iter: 300, trials: 10, samples: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub ell: i64,
    pub tolerances: Tolerances,
    pub seeds: Seeds,
    pub budgets: Budgets,
}

impl Default for Options {
    fn default() -> Self {
        Self { ell: 1, tolerances: Tolerances::default(), seeds: Seeds::default(), budgets: Budgets::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    pub curves: Vec<CurveEntry>,
    pub gram: Vec<Vec<i64>>,
    pub mult: Vec<i64>,
    #[serde(default)]
    pub polarizations: BTreeMap<String, RationalVector>,
    #[serde(default)]
    pub options: Options,
}

fn default_version() -> u32 {
    CONFIG_SCHEMA_VERSION
}

/// A validated configuration document.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub document: ConfigDocument,
    pub curve: CurveConfig,
    pub polarizations: BTreeMap<String, DegreeVector>,
}

impl Config {
    pub fn polarization(&self, name: &str) -> Result<&DegreeVector, CliError> {
        self.polarizations
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("unknown polarization {name:?}")))
    }

    pub fn budget(&self, seed: u64) -> StabilityBudget {
        let b = &self.document.options.budgets;
        StabilityBudget {
            probes: b.probes,
            restarts: b.restarts,
            tol: self.document.options.tolerances.defect,
            max_iter: b.max_iter,
            seed,
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        let t = &self.document.options.tolerances;
        SolverOptions { tol: t.residual, rank_tol: t.rank, ..SolverOptions::default() }
    }
}

fn invariant(e: LatticeError) -> CliError {
    CliError::Invariant { name: e.invariant().to_string(), message: e.to_string() }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<Config, CliError> {
    let document: ConfigDocument = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    if document.schema_version != CONFIG_SCHEMA_VERSION {
        return Err(CliError::Schema(format!("unsupported schema_version {}", document.schema_version)));
    }
    let mut mult = Vec::with_capacity(document.mult.len());
    for (i, &m) in document.mult.iter().enumerate() {
        if m <= 0 {
            return Err(invariant(LatticeError::NonPositiveMultiplicity { i }));
        }
        let m = u32::try_from(m).map_err(|_| invariant(LatticeError::OutOfRange { field: "mult", i }))?;
        mult.push(m);
    }
    let chi = document.curves.iter().map(|c| c.chi).collect();
    let h0deg = document.curves.iter().map(|c| c.h0deg).collect();
    let curve = CurveConfig::new(document.gram.clone(), chi, mult, h0deg).map_err(invariant)?;
    let mut polarizations = BTreeMap::new();
    for (name, v) in &document.polarizations {
        if v.0.len() != curve.s() {
            return Err(invariant(LatticeError::Length { field: "polarization", expected: curve.s(), found: v.0.len() }));
        }
        let a = DegreeVector::new(v.0.clone()).map_err(invariant)?;
        polarizations.insert(name.clone(), a);
    }
    Ok(Config { document, curve, polarizations })
}
