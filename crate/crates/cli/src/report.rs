//! Report types and their text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use whframe::conditions::ConditionReport;
use whframe::oracle::OracleReport;
use whframe::{ConditionId, RieszVerdict};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequestEcho {
    pub window: String,
    pub a: f64,
    pub b: f64,
    pub checks: Vec<ConditionId>,
    pub oracle: bool,
    pub resolution: usize,
    pub tol_zero: f64,
    pub seed: u64,
    pub trials: usize,
    pub claimed_b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionEntry {
    #[serde(flatten)]
    pub report: ConditionReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub riesz: Option<RieszVerdict>,
}

/// A published value for a built-in example next to the computed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub condition: ConditionId,
    pub quantity: String,
    pub published: f64,
    pub computed: Option<f64>,
    pub agrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyKind {
    /// Computed value differs from the published one.
    ReferenceMismatch,
    /// An oracle ratio or Gram eigenvalue exceeds a computed upper bound.
    OracleAboveUpperBound,
    /// An oracle ratio falls below a computed lower bound.
    OracleBelowLowerBound,
    /// An oracle ratio exceeds a published upper bound.
    OracleAbovePublishedBound,
}

impl DiscrepancyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiscrepancyKind::ReferenceMismatch => "reference-mismatch",
            DiscrepancyKind::OracleAboveUpperBound => "oracle-above-upper-bound",
            DiscrepancyKind::OracleBelowLowerBound => "oracle-below-lower-bound",
            DiscrepancyKind::OracleAbovePublishedBound => "oracle-above-published-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    pub condition: ConditionId,
    pub quantity: String,
    pub expected: f64,
    pub observed: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub version: String,
    pub request: RequestEcho,
    pub conditions: Vec<ConditionEntry>,
    pub oracle: Vec<OracleReport>,
    pub references: Vec<ReferenceCheck>,
    pub discrepancies: Vec<Discrepancy>,
}

impl AnalysisReport {
    pub fn condition(&self, id: ConditionId) -> Option<&ConditionEntry> {
        self.conditions.iter().find(|c| c.report.condition_id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// Short fixed-point form for tables; structured output keeps full precision.
pub fn num(v: f64) -> String {
    if v == 0.0 || (1e-4..1e7).contains(&v.abs()) {
        let s = format!("{v:.9}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.into() }
    } else if v.is_finite() {
        format!("{v:.4e}")
    } else {
        format!("{v}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), num)
}

pub fn emit(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text(report),
    }
}

fn text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let q = &r.request;
    let _ = writeln!(out, "window {}  a = {}  b = {}  resolution {}", q.window, num(q.a), num(q.b), q.resolution);
    if !r.conditions.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<18} {:<13} {:>14} {:>14}  target", "condition", "verdict", "lower", "upper");
        for c in &r.conditions {
            let rep = &c.report;
            let _ = writeln!(
                out,
                "{:<18} {:<13} {:>14} {:>14}  {:?}",
                rep.condition_id.as_str(),
                format!("{:?}", rep.verdict),
                opt(rep.lower_bound),
                opt(rep.upper_bound),
                rep.target_space
            );
            for w in &rep.witnesses {
                let at = match (w.x, w.side) {
                    (Some(x), Some(side)) => format!(" at x = {} ({side:?})", num(x)),
                    (Some(x), None) => format!(" at x = {}", num(x)),
                    _ => String::new(),
                };
                let _ = writeln!(out, "    {} = {}{}", w.quantity, num(w.value), at);
            }
            if let Some(rz) = &c.riesz {
                let _ = writeln!(
                    out,
                    "    frame sequence: {}  riesz: {}  zero set measure = {}",
                    rz.is_frame_sequence,
                    rz.is_riesz_sequence,
                    num(rz.zero_set_measure)
                );
            }
            if let Some(reason) = &rep.reason {
                let _ = writeln!(out, "    reason: {reason}");
            }
        }
    }
    if !r.references.is_empty() {
        let _ = writeln!(out, "\npublished values");
        for c in &r.references {
            let _ = writeln!(
                out,
                "  {:<10} {:<16} published {:>12}  computed {:>12}  {}",
                c.condition.as_str(),
                c.quantity,
                num(c.published),
                opt(c.computed),
                if c.computed.is_none() { "not run" } else if c.agrees { "agrees" } else { "DIFFERS" }
            );
        }
    }
    if !r.oracle.is_empty() {
        let _ = writeln!(out, "\noracle");
        for o in &r.oracle {
            let meta: Vec<String> = o.metadata.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
            let _ = writeln!(out, "  {:<22} {:>14}  {}", o.quantity.as_str(), num(o.value), meta.join(" "));
        }
    }
    if !r.discrepancies.is_empty() {
        let _ = writeln!(out);
        for d in &r.discrepancies {
            let _ = writeln!(out, "FLAG {} {}", d.kind.as_str(), d.message);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(num(9.0), "9");
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1e-12), "1.0000e-12");
        assert_eq!(num(f64::INFINITY), "inf");
    }
}
