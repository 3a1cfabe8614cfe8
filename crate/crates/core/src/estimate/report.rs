use serde::{Deserialize, Serialize};

use super::stats::SampleSummary;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// A one-sided bound an estimate must respect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    /// Estimate must not exceed this (slack already included).
    pub bound: f64,
    pub passed: bool,
}

/// Monte Carlo summary of one quantity.
///
/// `passed` is `None` for diagnostics with neither a target nor bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub quantity: String,
    pub n: Option<u64>,
    pub eps: Option<f64>,
    pub level: Option<u32>,
    pub reps: u64,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub target: Option<f64>,
    pub z_score: Option<f64>,
    pub bias_budget: f64,
    pub gate_sigmas: f64,
    pub passed: Option<bool>,
    #[serde(default)]
    pub bounds: Vec<BoundCheck>,
}

impl EstimateReport {
    pub fn new(quantity: impl Into<String>, estimate: f64, std_error: f64, reps: u64, seed: u64) -> Self {
        Self {
            quantity: quantity.into(),
            n: None,
            eps: None,
            level: None,
            reps,
            seed,
            estimate,
            std_error,
            ci_low: estimate - Z95 * std_error,
            ci_high: estimate + Z95 * std_error,
            target: None,
            z_score: None,
            bias_budget: 0.0,
            gate_sigmas: 0.0,
            passed: None,
            bounds: Vec::new(),
        }
    }

    pub fn from_summary(quantity: impl Into<String>, summary: &SampleSummary, seed: u64) -> Self {
        Self::new(quantity, summary.mean, summary.std_error, summary.count as u64, seed)
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = Some(level);
        self
    }

    /// Gate `|estimate − target| ≤ sigmas·std_error + budget`.
    pub fn with_target(mut self, target: f64, budget: f64, sigmas: f64) -> Self {
        let deviation = self.estimate - target;
        self.target = Some(target);
        self.bias_budget = budget;
        self.gate_sigmas = sigmas;
        self.z_score = if self.std_error > 0.0 {
            Some(deviation / self.std_error)
        } else if deviation == 0.0 {
            Some(0.0)
        } else {
            None
        };
        self.passed = Some(deviation.abs() <= sigmas * self.std_error + budget);
        self
    }

    /// Require `estimate ≤ limit + sigmas·std_error + budget`.
    pub fn with_upper_bound(mut self, name: impl Into<String>, limit: f64, budget: f64, sigmas: f64) -> Self {
        let bound = limit + sigmas * self.std_error + budget;
        let ok = self.estimate <= bound;
        self.gate_sigmas = sigmas;
        self.bias_budget = budget;
        self.bounds.push(BoundCheck { name: name.into(), bound, passed: ok });
        self.passed = Some(self.passed.unwrap_or(true) && ok);
        self
    }

    pub fn failed(&self) -> bool {
        self.passed == Some(false)
    }
}
