//! Machine-readable run reports. Field order is fixed by the struct layouts, so
//! identical runs serialize to identical bytes.

use serde::Serialize;
use serde_json::Value;

use super::args::Common;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GridConfig {
    pub mode: String,
    pub n: usize,
    pub l: f64,
}

/// The parts of a run configuration that can influence results. The thread count
/// is not among them.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportConfig {
    pub grid: GridConfig,
    pub seed: u64,
    pub kmax: usize,
    pub band: f64,
    pub format: String,
    pub signal: Option<String>,
    pub input: Option<String>,
}

impl ReportConfig {
    pub fn from_common(c: &Common) -> ReportConfig {
        ReportConfig {
            grid: GridConfig {
                mode: crate::grid::GridMode::from(c.mode).as_str().to_string(),
                n: c.grid_n,
                l: c.grid_l,
            },
            seed: c.seed,
            kmax: c.kmax,
            band: c.band,
            format: c.format.as_str().to_string(),
            signal: c.signal.as_ref().map(|s| s.describe()),
            input: c.input.as_ref().map(|p| p.display().to_string()),
        }
    }
}

/// One suite assertion.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Check {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    /// Passes when `value ≥ threshold`.
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Check {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value >= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: ReportConfig,
    pub results: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reports: Option<Value>,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, config: ReportConfig) -> Report {
        Report {
            command: command.to_string(),
            config,
            results: Vec::new(),
            reports: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
