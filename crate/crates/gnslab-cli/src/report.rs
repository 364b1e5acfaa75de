//! The result.json schema and the generic checks table. Every residual a
//! runner measures lands in a `Check` row; the report's `pass` conjunction
//! drives the process exit code.

use gnslab::numerics::NumericPolicy;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
}

pub fn check(label: impl Into<String>, residual: f64, tolerance: f64) -> Check {
    Check {
        label: label.into(),
        pass: residual <= tolerance,
        residual,
        tolerance,
    }
}

/// Exact equality reported in the same row shape: residual |got − want|,
/// tolerance 0.
pub fn check_eq(label: impl Into<String>, got: i64, want: i64) -> Check {
    check(label, (got - want).abs() as f64, 0.0)
}

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub scenario_kind: &'static str,
    pub seed: u64,
    pub tol_profile: String,
    pub numeric_policy: NumericPolicy,
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(
        kind: &'static str,
        seed: u64,
        tol_profile: String,
        numeric_policy: NumericPolicy,
        results: serde_json::Value,
        checks: Vec<Check>,
    ) -> Report {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Report {
            schema_version: crate::scenario::SCHEMA_VERSION,
            scenario_kind: kind,
            seed,
            tol_profile,
            numeric_policy,
            results,
            checks,
            pass,
        }
    }
}

pub fn checks_csv(checks: &[Check]) -> String {
    let mut out = String::from("label,pass,residual,tolerance\n");
    for c in checks {
        out.push_str(&format!(
            "{},{},{:.12e},{:.12e}\n",
            c.label.replace(',', ";"),
            c.pass,
            c.residual,
            c.tolerance
        ));
    }
    out
}
