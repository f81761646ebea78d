use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

/// Designer inputs for an automatic deployment: network radius, maximum
/// layer count, total node count, plus the RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    #[serde(rename = "L")]
    pub size: f64,
    #[serde(rename = "n_Lmax")]
    pub max_layers: usize,
    #[serde(rename = "n_S")]
    pub nodes: usize,
    pub seed: u64,
}

impl NetworkConfig {
    pub fn new(size: f64, max_layers: usize, nodes: usize, seed: u64) -> Self {
        Self {
            size,
            max_layers,
            nodes,
            seed,
        }
    }

    /// Every invariant this config breaks, in a fixed order. Empty when valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        // written so that NaN is rejected too
        if !(self.size > 0.0 && self.size.is_finite()) {
            out.push(Violation::NonPositiveSize);
        }
        if self.max_layers < 2 {
            out.push(Violation::TooFewLayers);
        }
        if self.nodes < 1 {
            out.push(Violation::NoNodes);
        }
        if self.nodes < self.max_layers {
            out.push(Violation::FewerNodesThanLayers);
        }
        out
    }

    pub fn validated(self) -> Result<Self> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidConfig(violations))
        }
    }
}

pub fn validate_config(config: &NetworkConfig) -> Result<NetworkConfig> {
    config.validated()
}
