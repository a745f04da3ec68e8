//! Serde-facing run configurations.
//!
//! Every optional field has a default, so minimal configs stay minimal and
//! the resolved struct (with every default filled in) is what gets echoed
//! into the output document.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::estimators::{CltOptions, SurrogateConfig};
use crate::rng::SeedSpec;
use crate::zonotope::{ValuationSpec, DEFAULT_TERM_BUDGET};

fn default_scale() -> f64 {
    1.0
}

fn default_budget() -> u64 {
    DEFAULT_TERM_BUDGET as u64
}

fn default_residual_tolerance() -> f64 {
    1e-10
}

fn default_max_abs_z() -> f64 {
    4.0
}

fn default_variance_rtol() -> f64 {
    0.15
}

fn default_directions() -> usize {
    256
}

fn default_empirical_n() -> usize {
    4096
}

/// An explicit zonotope, as plain coordinate lists.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZonotopeConfig {
    pub dim: usize,
    pub generators: Vec<Vec<f64>>,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

/// Residual check of the subset averaging identity at order `p`, applied to
/// each requested valuation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetIdentityCheck {
    pub p: usize,
    #[serde(default = "default_residual_tolerance")]
    pub tolerance: f64,
}

/// Configuration of the `exact` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactConfig {
    pub zonotope: ZonotopeConfig,
    pub valuations: Vec<ValuationSpec>,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub subset_identity: Option<SubsetIdentityCheck>,
}

/// Configuration of the `theorem1` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem1Config {
    pub distribution: DistributionSpec,
    pub valuation: ValuationSpec,
    /// Sample size of each replicated zonoid Z_p.
    pub p: usize,
    pub reps: u64,
    #[serde(default)]
    pub seed: SeedSpec,
    #[serde(default = "default_max_abs_z")]
    pub max_abs_z: f64,
    #[serde(default)]
    pub surrogate: SurrogateConfig,
}

/// Configuration of the `clt` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CltConfig {
    pub distribution: DistributionSpec,
    pub valuation: ValuationSpec,
    /// Sample size inside each replication.
    pub n: usize,
    pub reps: u64,
    #[serde(default)]
    pub seed: SeedSpec,
    #[serde(default)]
    pub options: CltOptions,
    #[serde(default)]
    pub surrogate: SurrogateConfig,
    /// Allowed relative deviation of empirical from predicted variance.
    #[serde(default = "default_variance_rtol")]
    pub variance_rtol: f64,
    /// KS pass threshold; resolved to 1.63 / sqrt(reps) when absent.
    #[serde(default)]
    pub ks_threshold: Option<f64>,
}

/// Configuration of the `zonoid` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZonoidConfig {
    pub distribution: DistributionSpec,
    /// Direction grid size for support comparisons.
    #[serde(default = "default_directions")]
    pub directions: usize,
    /// Sample size of the empirical zonoid.
    #[serde(default = "default_empirical_n")]
    pub empirical_n: usize,
    #[serde(default)]
    pub seed: SeedSpec,
    /// Optional cap on the Hausdorff estimate.
    #[serde(default)]
    pub max_hausdorff: Option<f64>,
    /// Monte Carlo draws for the Gaussian radius check; 0 skips it.
    #[serde(default)]
    pub radius_samples: u64,
}

/// Reads and parses a JSON run configuration.
pub fn load_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
