//! Flat key-value configuration files (TOML restricted to top-level keys).
//! Every command validates against its own schema and rejects unknown keys
//! outright; a typo must fail the run, not silently skew a sweep.

use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinarySurfaceConfig {
    pub r0_min: f64,
    pub r0_max: f64,
    pub r0_steps: usize,
    pub d_min: f64,
    pub d_max: f64,
    pub d_steps: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianFamilyConfig {
    pub eta: f64,
    pub delta: f64,
    pub nu_steps: usize,
    pub nu_min: Option<f64>,
    pub nu_max: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSearchConfig {
    /// "noiseless" or "si-dec".
    pub mode: String,
    /// Source law for noiseless mode.
    pub source: Option<Vec<f64>>,
    /// Joint (X,Z) law for side-information mode: rows x, columns z.
    pub joint_source: Option<Vec<Vec<f64>>>,
    pub distortion: Vec<Vec<f64>>,
    /// Targets as (rate, common randomness rate, distortion) triples.
    pub targets: Vec<Vec<f64>>,
    pub starts: Option<usize>,
    pub u_size: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcToolsConfig {
    /// Either marginal channels (independent noise components) ...
    pub y_marginal: Option<Vec<Vec<f64>>>,
    pub z_marginal: Option<Vec<Vec<f64>>>,
    /// ... or a y marginal plus a degrading channel (physically degraded),
    pub degrading: Option<Vec<Vec<f64>>>,
    /// ... or the full joint with explicit output alphabet sizes.
    pub joint: Option<Vec<Vec<f64>>>,
    pub y_size: Option<usize>,
    pub z_size: Option<usize>,
    pub witness_source: Vec<f64>,
    pub witness_u: Vec<Vec<f64>>,
    pub witness_y: Vec<Vec<f64>>,
    /// Input distribution for the more-capable specialization; defaults to
    /// uniform.
    pub x_dist: Option<Vec<f64>>,
    pub distortion: Vec<Vec<f64>>,
    pub kappa: f64,
    pub rate: f64,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OsrbCmdConfig {
    pub source: Vec<f64>,
    /// Forward witness channels: P(U|X) rows, then P(Y|U) rows.
    pub u_channel: Vec<Vec<f64>>,
    pub y_channel: Vec<Vec<f64>>,
    pub distortion: Vec<Vec<f64>>,
    /// Explicit rates, or an offset above the witness corner.
    pub rate: Option<f64>,
    pub common_rate: Option<f64>,
    pub delta_above_corner: Option<f64>,
    pub n_list: Vec<usize>,
    pub seeds: usize,
    pub seed: Option<u64>,
}

pub fn load<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}
