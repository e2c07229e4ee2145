//! The JSON report document and its text rendering.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use spacings_core::{Estimate, HolstComparison, McSummary, TestReport};

pub const SCHEMA_VERSION: &str = "1.0";

/// Every command prints exactly one of these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub params: Params,
    pub result: ReportResult,
    pub warnings: Vec<String>,
    /// `null` unless timing was requested, so seeded runs stay byte-identical.
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Params {
    Test(TestParams),
    Simulate(SimulateParams),
    Sigma(SigmaParams),
    Meancheck(MeancheckParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestParams {
    pub data: String,
    pub n: usize,
    pub m: usize,
    pub statistic: String,
    pub variant: String,
    pub scheme: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateParams {
    pub n: usize,
    pub m: usize,
    pub statistic: String,
    pub variant: String,
    pub scheme: String,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaParams {
    pub statistic: String,
    pub m: usize,
    pub draws: usize,
    pub seed: u64,
    pub compare_holst: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeancheckParams {
    pub statistic: String,
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub draws: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportResult {
    Test(TestResult),
    Simulate(SimulateResult),
    Sigma(SigmaResult),
    Meancheck(MeancheckResult),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateDoc {
    pub value: f64,
    pub se: f64,
}

impl From<Estimate> for EstimateDoc {
    fn from(e: Estimate) -> Self {
        Self { value: e.value, se: e.se }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestResult {
    pub value: f64,
    pub summands: usize,
    pub asymptotic_mean: f64,
    pub asymptotic_variance: f64,
    pub z: f64,
    pub p_two_sided: f64,
    pub p_lower: f64,
    pub p_upper: f64,
}

impl TestResult {
    pub fn new(report: &TestReport, summands: usize) -> Self {
        Self {
            value: report.value,
            summands,
            asymptotic_mean: report.mean,
            asymptotic_variance: report.variance,
            z: report.z,
            p_two_sided: report.p_two_sided,
            p_lower: report.p_lower,
            p_upper: report.p_upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateResult {
    pub replications: usize,
    pub asymptotic_mean: f64,
    pub asymptotic_variance: f64,
    pub z_mean: f64,
    pub z_variance: f64,
    pub ks_distance: f64,
    pub min_z: f64,
    pub max_z: f64,
}

impl SimulateResult {
    pub fn new(summary: &McSummary, asymptotic_mean: f64, asymptotic_variance: f64) -> Self {
        Self {
            replications: summary.replications,
            asymptotic_mean,
            asymptotic_variance,
            z_mean: summary.mean,
            z_variance: summary.variance,
            ks_distance: summary.ks_distance,
            min_z: summary.min_z,
            max_z: summary.max_z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaResult {
    pub sigma2: EstimateDoc,
    pub closed_form: Option<f64>,
    pub holst: Option<HolstDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolstDoc {
    pub holst: EstimateDoc,
    pub corrected: EstimateDoc,
    pub difference: EstimateDoc,
}

impl From<HolstComparison> for HolstDoc {
    fn from(c: HolstComparison) -> Self {
        Self { holst: c.holst.into(), corrected: c.corrected.into(), difference: c.difference.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeancheckResult {
    /// `n·E h(X^m)`
    pub leading_term: EstimateDoc,
    /// First-order correction `½ cov(h, (|X^m| − m) − (|X^m| − m)²)`.
    pub formula_correction: EstimateDoc,
    pub simulated_mean: EstimateDoc,
    /// Simulated mean minus the leading term.
    pub simulated_correction: EstimateDoc,
    /// Exact finite-n correction where it is known.
    pub exact_correction: Option<f64>,
    /// `|formula − simulated|` in combined standard errors.
    pub formula_discrepancy_se: f64,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// `key: value` lines, numbers to 6 significant digits.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serialises");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) if items.is_empty() => out.push_str(&format!("{prefix}: (none)\n")),
        Value::Array(items) => {
            items.iter().enumerate().for_each(|(i, v)| flatten(&format!("{prefix}[{i}]"), v, out))
        }
        Value::Number(n) if n.is_f64() => {
            out.push_str(&format!("{prefix}: {}\n", significant(n.as_f64().unwrap_or(f64::NAN), 6)))
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// `%g`-style rendering with `digits` significant digits.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits() {
        assert_eq!(significant(0.4237107971667933, 6), "0.423711");
        assert_eq!(significant(-0.8, 6), "-0.8");
        assert_eq!(significant(4.8, 6), "4.8");
        assert_eq!(significant(1234567.0, 6), "1.23457e6");
        assert_eq!(significant(0.000012345678, 6), "1.23457e-5");
        assert_eq!(significant(999999.7, 6), "1e6");
        assert_eq!(significant(20.0, 6), "20");
        assert_eq!(significant(0.0, 6), "0");
    }
}
