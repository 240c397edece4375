//! Experiment configuration.
//!
//! The file is flat TOML: one `key = value` per line, `#` comments, lists in
//! brackets. Every key is optional and unknown keys are rejected.
//!
//! | key | type | default |
//! |-----|------|---------|
//! | `n_qubits` | integer | 200000 |
//! | `p_grid` | list of floats in [0, 1] | `[0.02, 0.04, 0.06, 0.08, 0.1]` |
//! | `s_grid` | list of floats in [0, 1] | `[0.0]` |
//! | `codec_preset` | `ldpc1`, `ldpc2`, `turbo1`, `turbo2` | `turbo1` |
//! | `iterations` | integer, decoder iteration cap | family default |
//! | `iteration_list` | list of integers, for iteration sweeps | `[2, 6, 10, 14]` |
//! | `interleaver_kind` | `random` or `structured` | `random` |
//! | `trials` | integer | 20 |
//! | `master_seed` | integer | 1 |
//! | `disclose_fraction` | float in [0, 1) | 0.1 |
//! | `prior` | `analytic` or `estimated` | `analytic` |
//! | `direction` | `forward` or `reverse` | `forward` |
//! | `workers` | integer, 0 for all cores | 0 |
//! | `record_timing` | bool | false |
//! | `output_path` | path | `results.csv` |

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::codec::preset_info;
use crate::error::{Error, Result};
use crate::reconcile::Direction;
use crate::turbo::InterleaverKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PriorSource {
    /// Sifted error rate predicted from the channel parameters.
    #[default]
    Analytic,
    /// Error rate measured on the disclosed sample.
    Estimated,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    pub p_grid: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub codec_preset: String,
    pub iterations: Option<usize>,
    pub iteration_list: Vec<usize>,
    pub interleaver_kind: String,
    pub trials: usize,
    pub master_seed: u64,
    pub disclose_fraction: f64,
    pub prior: PriorSource,
    pub direction: String,
    pub workers: usize,
    pub record_timing: bool,
    pub output_path: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_qubits: 200_000,
            p_grid: vec![0.02, 0.04, 0.06, 0.08, 0.1],
            s_grid: vec![0.0],
            codec_preset: "turbo1".into(),
            iterations: None,
            iteration_list: vec![2, 6, 10, 14],
            interleaver_kind: "random".into(),
            trials: 20,
            master_seed: 1,
            disclose_fraction: 0.1,
            prior: PriorSource::Analytic,
            direction: "forward".into(),
            workers: 0,
            record_timing: false,
            output_path: PathBuf::from("results.csv"),
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn interleaver(&self) -> Result<InterleaverKind> {
        self.interleaver_kind.parse().map_err(|e: Error| config_err(e.to_string()))
    }

    pub fn direction(&self) -> Result<Direction> {
        match self.direction.as_str() {
            "forward" => Ok(Direction::Forward),
            "reverse" => Ok(Direction::Reverse),
            other => Err(config_err(format!("direction `{other}` is not forward or reverse"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(config_err("n_qubits must be positive"));
        }
        for (name, grid) in [("p_grid", &self.p_grid), ("s_grid", &self.s_grid)] {
            if grid.is_empty() {
                return Err(config_err(format!("{name} is empty")));
            }
            if let Some(v) = grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(config_err(format!("{name} value {v} is outside [0, 1]")));
            }
        }
        preset_info(&self.codec_preset).map_err(|e| config_err(e.to_string()))?;
        if self.iterations == Some(0) {
            return Err(config_err("iterations must be at least 1"));
        }
        if self.iteration_list.contains(&0) {
            return Err(config_err("iteration_list entries must be at least 1"));
        }
        self.interleaver()?;
        self.direction()?;
        if self.trials == 0 {
            return Err(config_err("trials must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.disclose_fraction) {
            return Err(config_err("disclose_fraction must be in [0, 1)"));
        }
        if self.prior == PriorSource::Estimated && self.disclose_fraction == 0.0 {
            return Err(config_err("prior = \"estimated\" needs a positive disclose_fraction"));
        }
        Ok(())
    }
}
