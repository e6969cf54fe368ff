//! File formats, reports, verification suites and the `ltf` command line
//! for the `ltf-core` library.

pub mod cli;
pub mod config;
pub mod export;
pub mod format;
pub mod suites;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] ltf_core::Error),
    #[error("io error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("usage error: {0}")]
    Usage(String),
}

impl CliError {
    /// Stable machine-readable kind for the error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Domain(e) => match e {
                ltf_core::Error::DimensionMismatch { .. } => "dimension_mismatch",
                ltf_core::Error::CapExceeded { .. } => "cap_exceeded",
                ltf_core::Error::WorkCap(_) => "work_cap",
                ltf_core::Error::LpCapExceeded { .. } => "lp_cap_exceeded",
                ltf_core::Error::InvalidParameter(_) => "invalid_parameter",
                ltf_core::Error::InvalidDistribution(_) => "invalid_distribution",
                ltf_core::Error::Unsampleable(_) => "unsampleable",
                ltf_core::Error::NotThreshold => "not_threshold",
                ltf_core::Error::Hypothesis(_) => "hypothesis",
                ltf_core::Error::ZeroWeights => "zero_weights",
                ltf_core::Error::Degenerate(_) => "degenerate",
                ltf_core::Error::Parse(_) => "parse",
                ltf_core::Error::Internal(_) => "internal",
            },
            CliError::Io(_) => "io",
            CliError::Format(_) => "format",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() })
    }
}
