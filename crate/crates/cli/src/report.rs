//! JSON verification reports with a stable schema.

use serde::Serialize;

/// One named quantity compared against its threshold.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    /// Threshold the value is compared against; `direction` says which way.
    pub threshold: f64,
    /// "max" when value must stay at or below the threshold, "min" otherwise.
    pub direction: String,
    pub pass: bool,
}

impl CheckResult {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            direction: "max".into(),
            pass: value.is_finite() && value <= threshold,
        }
    }

    pub fn boolean(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value: if pass { 1.0 } else { 0.0 },
            threshold: 1.0,
            direction: "min".into(),
            pass,
        }
    }
}

/// Outcome of one `verify` subcommand run.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: serde_json::Value,
    pub results: Vec<CheckResult>,
    pub pass: bool,
    pub wall_time_s: f64,
    pub quadrature_evaluations: u64,
}

impl VerificationReport {
    pub fn new(
        check: &str,
        parameters: serde_json::Value,
        results: Vec<CheckResult>,
        wall_time_s: f64,
        quadrature_evaluations: u64,
    ) -> Self {
        let pass = results.iter().all(|r| r.pass);
        Self {
            check: check.to_string(),
            parameters,
            results,
            pass,
            wall_time_s,
            quadrature_evaluations,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
