use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use tmsort::spdc::{SPDCParams, SIGMA_S};

use crate::CliError;

/// Reference source used when a config names none.
pub const DEFAULT_TAU_O: f64 = 2.95;
pub const DEFAULT_TAU_P: f64 = 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SortDemo,
    SweepPtot,
    SweepParity,
    JtaMap,
    Schmidt,
    DesignSource,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    #[default]
    Exact,
    Gauss,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SorterConfig {
    pub m: Option<u32>,
    pub tau: Option<f64>,
    pub delta_t: Option<f64>,
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub k_target: Option<f64>,
    pub f_rf_ghz: Option<f64>,
    pub tau_o: Option<f64>,
    pub sigma_s: Option<f64>,
}

/// Run configuration read from JSON; command-line flags override it.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Option<Experiment>,
    pub source: Option<SPDCParams>,
    /// Symmetric source with this Schmidt number at `source.tau_o` (schmidt only).
    pub schmidt_k: Option<f64>,
    pub sorter: Option<SorterConfig>,
    pub sweep: Option<SweepConfig>,
    pub design: Option<DesignConfig>,
    pub kernel: Option<Kernel>,
    pub grid_n: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn check_experiment(&self, cmd: Experiment) -> Result<(), CliError> {
        match self.experiment {
            Some(e) if e != cmd => {
                Err(CliError::Config(format!("config is for {e:?} but the command is {cmd:?}")))
            }
            _ => Ok(()),
        }
    }

    pub fn source(&self) -> Result<SPDCParams, CliError> {
        let p = match &self.source {
            Some(p) => p.clone(),
            None => SPDCParams::symmetric(DEFAULT_TAU_O, DEFAULT_TAU_P)?,
        };
        Ok(p.validated()?)
    }

    pub fn sorter(&self) -> SorterConfig {
        self.sorter.clone().unwrap_or_default()
    }

    pub fn sweep(&self) -> SweepConfig {
        self.sweep.clone().unwrap_or_default()
    }

    pub fn design(&self) -> DesignConfig {
        self.design.clone().unwrap_or_default()
    }

    pub fn sigma_s(&self) -> f64 {
        self.design.as_ref().and_then(|d| d.sigma_s).unwrap_or(SIGMA_S)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

pub fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}
