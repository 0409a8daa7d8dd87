//! JSON configuration files: parsing, validation, and the bridge to an
//! assembly problem. A previously written report embeds the configuration
//! it ran with, and such a report is itself accepted as a configuration, so
//! results can be reproduced from their own output.

use serde::{Deserialize, Serialize};

use crate::assembler::{AssemblyConfig, OptimizerConfig};
use crate::chain::ModelSet;
use crate::circuit::CircuitProfile;
use crate::error::{Error, Result};

/// Sections a configuration document must provide.
const REQUIRED_SECTIONS: [&str; 3] = ["models", "circuit", "optimizer"];

/// Optional output preferences carried in the file (command-line flags win).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory reports are written into.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    /// Formats to emit, e.g. `["json", "csv"]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<String>>,
}

/// A full configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Physical and protocol models.
    pub models: ModelSet,
    /// Workload being compiled.
    pub circuit: CircuitProfile,
    /// Optimization knobs.
    pub optimizer: OptimizerConfig,
    /// Output preferences.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

impl RunConfig {
    /// Validate every section.
    pub fn validate(&self) -> Result<()> {
        self.to_assembly().validate()
    }

    /// The assembly problem this configuration describes.
    pub fn to_assembly(&self) -> AssemblyConfig {
        AssemblyConfig {
            models: self.models.clone(),
            circuit: self.circuit.clone(),
            optimizer: self.optimizer.clone(),
        }
    }
}

impl From<&AssemblyConfig> for RunConfig {
    fn from(cfg: &AssemblyConfig) -> Self {
        RunConfig {
            models: cfg.models.clone(),
            circuit: cfg.circuit.clone(),
            optimizer: cfg.optimizer.clone(),
            output: None,
        }
    }
}

/// Parse and validate a configuration document. A report written by this
/// tool (recognized by its `schema_version` plus embedded `config`) is
/// unwrapped to the configuration it ran with.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let Some(top) = value.as_object() else {
        return Err(Error::InvalidConfig {
            path: "$".into(),
            message: "the document must be a JSON object".into(),
        });
    };
    let effective = if top.contains_key("schema_version") && top.contains_key("config") {
        top["config"].clone()
    } else {
        value
    };

    if let Some(map) = effective.as_object() {
        let missing: Vec<&str> = REQUIRED_SECTIONS
            .iter()
            .filter(|k| !map.contains_key(**k))
            .copied()
            .collect();
        if !missing.is_empty() {
            return Err(Error::InvalidConfig {
                path: "$".into(),
                message: format!("missing required sections: {}", missing.join(", ")),
            });
        }
    }

    let cfg: RunConfig = serde_json::from_value(effective)?;
    cfg.validate()?;
    Ok(cfg)
}
