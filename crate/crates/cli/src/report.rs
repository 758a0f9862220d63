//! Machine-readable verification report.

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One verified identity: passes when `value <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The identity or estimate under test, in words.
    pub anchor: String,
    pub value: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Check {
    pub fn measured(name: &str, anchor: &str, value: f64, tolerance: f64) -> Self {
        let status = if value <= tolerance { Status::Pass } else { Status::Fail };
        Check {
            name: name.into(),
            anchor: anchor.into(),
            value: Some(value),
            tolerance,
            status,
            reason: None,
        }
    }

    pub fn skipped(name: &str, anchor: &str, tolerance: f64, reason: &str) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            value: None,
            tolerance,
            status: Status::Skipped,
            reason: Some(reason.into()),
        }
    }

    pub fn failed(name: &str, anchor: &str, tolerance: f64, reason: &str) -> Self {
        Check {
            status: Status::Fail,
            ..Check::skipped(name, anchor, tolerance, reason)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<num_complex::Complex64> for ComplexValue {
    fn from(z: num_complex::Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

/// Normalization constants measured rather than assumed.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Constants {
    /// Quadrature `||psi_k||^2` of the printed `H_{kappa,l}` basis (mean over the box).
    pub kl_gram_diagonal: Option<f64>,
    /// `c` with `(B h_k, B h_j) = c delta_kj` against `exp(-|z|^2) d lambda`.
    pub bargmann_unitarity: Option<f64>,
    /// Szego kernel, numeric over closed form.
    pub szego_prefactor_ratio: Option<ComplexValue>,
}

/// A displayed formula that disagrees with its independent oracle.
/// Findings are informational and do not affect the exit status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub name: String,
    pub detail: String,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub constants: Constants,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            checks: Vec::new(),
            constants: Constants::default(),
            findings: Vec::new(),
        }
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
