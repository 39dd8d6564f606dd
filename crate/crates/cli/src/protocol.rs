//! Parameter-file handling and report serialization for the estimation
//! protocol command.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use unruh_metrology::detector::{DetectorParams, SingleDetectorParams, TwoDetectorParams};
use unruh_metrology::estimation::{run_estimation, EstimationReport};

fn default_omega() -> f64 {
    1.0
}

fn default_shots() -> u64 {
    100_000
}

/// On-disk protocol configuration (JSON).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    /// "single" or "two".
    pub model: String,
    #[serde(default = "default_omega")]
    pub omega: f64,
    pub acceleration: f64,
    pub mu: f64,
    /// Initial-state angle for the single-detector model.
    #[serde(default)]
    pub eta: Option<f64>,
    /// Initial-entanglement angle for the two-detector model.
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn to_detector_params(&self) -> Result<DetectorParams> {
        match self.model.as_str() {
            "single" => {
                let eta = match self.eta {
                    Some(v) => v,
                    None => bail!("the single-detector model needs an 'eta' value"),
                };
                Ok(DetectorParams::Single(SingleDetectorParams::new(
                    self.omega,
                    self.acceleration,
                    self.mu,
                    eta,
                )?))
            }
            "two" => {
                let theta = match self.theta {
                    Some(v) => v,
                    None => bail!("the two-detector model needs a 'theta' value"),
                };
                Ok(DetectorParams::Two(TwoDetectorParams::new(
                    self.omega,
                    self.acceleration,
                    self.mu,
                    theta,
                )?))
            }
            other => bail!("unknown model '{other}' (expected 'single' or 'two')"),
        }
    }
}

/// Load a protocol configuration, turning JSON syntax errors into
/// line/column diagnostics.
pub fn load_config(path: &Path) -> Result<ProtocolConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read parameter file {}", path.display()))?;
    // serde_json errors carry "at line L column C"
    serde_json::from_str(&text)
        .with_context(|| format!("malformed parameter file {}", path.display()))
}

/// Run the protocol and serialize the report; byte-identical for identical
/// inputs.
pub fn run_protocol(params: &DetectorParams, shots: u64, seed: u64) -> Result<EstimationReport> {
    Ok(run_estimation(params, shots, seed)?)
}

pub fn report_to_json(report: &EstimationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
