//! TOML configuration. Command-line flags override every field.

use std::path::Path;

use ltf_core::{Caps, PipelineConstants};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub method: Option<String>,
    pub eps: Option<String>,
    pub dist: Option<String>,
    pub seed: Option<u64>,
    pub budget: Option<u32>,
    #[serde(default)]
    pub constants: ConstantsSection,
    #[serde(default)]
    pub caps: CapsSection,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSection {
    #[serde(rename = "L_c", alias = "l_c")]
    pub l_c: Option<f64>,
    #[serde(rename = "K_c", alias = "k_c")]
    pub k_c: Option<f64>,
    #[serde(rename = "R_c", alias = "r_c")]
    pub r_c: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsSection {
    pub enum_n: Option<usize>,
    pub lp_rows: Option<usize>,
    pub work: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Format(format!("malformed config: {e}")))
    }

    pub fn apply_constants(&self, c: &mut PipelineConstants) {
        if let Some(v) = self.constants.l_c {
            c.l_c = v;
        }
        if let Some(v) = self.constants.k_c {
            c.k_c = v;
        }
        if let Some(v) = self.constants.r_c {
            c.r_c = v;
        }
        if let Some(v) = self.budget {
            c.budget = v;
        }
    }

    pub fn apply_caps(&self, caps: &mut Caps) {
        if let Some(v) = self.caps.enum_n {
            caps.enum_n = v;
        }
        if let Some(v) = self.caps.lp_rows {
            caps.lp_rows = v;
        }
        if let Some(v) = self.caps.work {
            caps.work = v;
        }
    }
}

/// Parses `L_c=..,K_c=..,R_c=..` (any subset, any order) into `c`.
pub fn parse_constants(spec: &str, c: &mut PipelineConstants) -> Result<(), CliError> {
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected NAME=VALUE in --constants, got {part:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("constant {key} is not a number: {value:?}")))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(CliError::Usage(format!("constant {key} must be positive")));
        }
        match key.trim() {
            "L_c" | "l_c" => c.l_c = value,
            "K_c" | "k_c" => c.k_c = value,
            "R_c" | "r_c" => c.r_c = value,
            other => return Err(CliError::Usage(format!("unknown constant {other:?}"))),
        }
    }
    Ok(())
}
