//! Output documents. JSON field order is fixed by declaration order, and the
//! text format is derived from the same JSON value.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::decide::{Check, MultisetOfDims, TwistWitness, Verdict};
use crate::graded_ring::GradedRingPresentation;
use crate::intpoly::IntPoly;
use crate::oracle::SearchReport;

/// Integers print as JSON numbers when they fit in `i64`, else as strings.
pub fn big(a: &BigInt) -> Value {
    match a.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(a.to_string()),
    }
}

#[derive(Debug, Serialize)]
pub struct MultisetsDoc {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

#[derive(Debug, Serialize)]
pub struct TwistDoc {
    pub bundle: String,
    pub lambda: String,
    /// `L` with `c(bundle ⊗ L) = 1`.
    pub line_bundle: String,
}

#[derive(Debug, Serialize)]
pub struct CheckDoc {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_of_h: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerdictDoc {
    pub decision: &'static str,
    pub fidelity: &'static str,
    pub reason: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multisets: Option<MultisetsDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub twists: Vec<TwistDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<Value>,
}

/// `O(a)` on a projective space, `O(class)` otherwise.
fn line_bundle(w: &TwistWitness) -> String {
    let inverse = w.lambda.neg();
    match inverse.degree_one_coords() {
        Some(coords) if coords.len() == 1 => format!("O({})", coords[0]),
        _ => format!("O({})", inverse.render()),
    }
}

fn check_doc(c: &Check) -> CheckDoc {
    CheckDoc {
        name: c.name.clone(),
        holds: c.holds,
        lambda: c.lambda.as_ref().map(|l| l.render()),
        image_of_h: c.image_of_h.as_ref().map(|l| l.render()),
    }
}

fn multiset(m: &MultisetOfDims) -> Vec<u32> {
    m.dims().to_vec()
}

impl From<&Verdict> for VerdictDoc {
    fn from(v: &Verdict) -> Self {
        VerdictDoc {
            decision: v.decision.code(),
            fidelity: v.fidelity.code(),
            reason: v.reason.code(),
            message: v.message.clone(),
            case: v.case.map(|c| c.label()),
            violated: v.violated.clone(),
            multisets: v.multisets.as_ref().map(|(l, r)| MultisetsDoc {
                left: multiset(l),
                right: multiset(r),
            }),
            twists: v
                .twists
                .iter()
                .map(|w| TwistDoc {
                    bundle: w.subject.clone(),
                    lambda: w.lambda.render(),
                    line_bundle: line_bundle(w),
                })
                .collect(),
            checks: v.checks.iter().map(check_doc).collect(),
            shift: v.shift.as_ref().map(big),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DecisionOutput {
    pub query: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routed_to: Option<&'static str>,
    pub verdict: VerdictDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity_note: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct ViolationOutput {
    pub query: String,
    pub status: &'static str,
    pub reason: &'static str,
    pub message: String,
}

impl ViolationOutput {
    pub fn new(query: &str, message: String) -> Self {
        ViolationOutput {
            query: query.to_string(),
            status: "HYPOTHESIS_VIOLATION",
            reason: "HYPOTHESIS_VIOLATION",
            message,
        }
    }
}

/// `1 + 2*t + t^2`: ascending powers of `t`.
pub fn ascending(p: &IntPoly) -> String {
    let mut out = String::new();
    for (m, c) in p.terms() {
        let e = m.exponents().first().copied().unwrap_or(0);
        let mag = if c < &BigInt::from(0) { -c } else { c.clone() };
        let body = match (e, mag == BigInt::from(1)) {
            (0, _) => mag.to_string(),
            (1, true) => "t".to_string(),
            (1, false) => format!("{mag}*t"),
            (_, true) => format!("t^{e}"),
            (_, false) => format!("{mag}*t^{e}"),
        };
        let negative = c < &BigInt::from(0);
        match (out.is_empty(), negative) {
            (true, false) => out.push_str(&body),
            (true, true) => out.push_str(&format!("-{body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
            (false, true) => out.push_str(&format!(" - {body}")),
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

fn coefficients(p: &IntPoly) -> Vec<Value> {
    let deg = p.total_degree().unwrap_or(0);
    (0..=deg).map(|i| big(&p.coeff_univariate(i))).collect()
}

#[derive(Debug, Serialize)]
pub struct RingOutput {
    pub query: String,
    pub presentation: String,
    pub variables: Vec<String>,
    pub relations: Vec<String>,
    pub relation_degrees: Vec<u32>,
    pub top_degree: u32,
    pub poincare: String,
    pub poincare_coefficients: Vec<Value>,
}

impl RingOutput {
    pub fn new(query: &str, ring: &GradedRingPresentation) -> Self {
        let names = ring.names();
        let p = ring.poincare_polynomial();
        RingOutput {
            query: query.to_string(),
            presentation: ring.render(),
            variables: ring.var_names().to_vec(),
            relations: ring.relations().iter().map(|r| r.render(&names)).collect(),
            relation_degrees: ring.relation_degrees().to_vec(),
            top_degree: ring.top_degree(),
            poincare: ascending(&p),
            poincare_coefficients: coefficients(&p),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PoincareOutput {
    pub query: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
    pub poincare: String,
    pub poincare_coefficients: Vec<Value>,
    pub multiset: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PoincareOutput {
    pub fn new(presentation: Option<String>, p: &IntPoly, recovered: Result<MultisetOfDims, String>) -> Self {
        let (multiset, error) = match recovered {
            Ok(m) => (Some(m.dims().to_vec()), None),
            Err(e) => (None, Some(e)),
        };
        PoincareOutput {
            query: "poincare".to_string(),
            presentation,
            poincare: ascending(p),
            poincare_coefficients: coefficients(p),
            multiset,
            error,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleOutput {
    pub query: String,
    pub left: String,
    pub right: String,
    pub bound: u32,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Value>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    pub matrices_tried: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

impl OracleOutput {
    pub fn new(
        left: &GradedRingPresentation,
        right: &GradedRingPresentation,
        report: &SearchReport,
        verified: Option<bool>,
    ) -> Self {
        OracleOutput {
            query: "oracle".to_string(),
            left: left.render(),
            right: right.render(),
            bound: report.bound,
            found: report.found.is_some(),
            matrix: report
                .found
                .as_ref()
                .map(|a| a.rows().iter().map(|r| r.iter().map(big).collect()).collect()),
            verified,
            matrices_tried: report.matrices_tried,
            reason: report.poincare_mismatch.then_some("POINCARE_MISMATCH"),
            caveat: report.caveat().then(|| {
                format!(
                    "no isomorphism matrix with entries in [-{b},{b}]; this does not prove the rings are non-isomorphic",
                    b = report.bound
                )
            }),
        }
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("none".to_string()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items
                .iter()
                .map(|i| match i {
                    Value::Array(_) | Value::Object(_) => None,
                    _ => scalar_text(i),
                })
                .collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn write_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match scalar_text(val) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(val, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar_text(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_text(item, indent + 1, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v).unwrap_or_default())),
    }
}

/// Indented `key: value` rendering of a JSON document.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascending_rendering() {
        assert_eq!(ascending(&IntPoly::univariate([1, 2, 1])), "1 + 2*t + t^2");
        assert_eq!(ascending(&IntPoly::univariate([1, -1, 0, 3])), "1 - t + 3*t^3");
        assert_eq!(ascending(&IntPoly::zero(1)), "0");
    }

    #[test]
    fn big_values() {
        assert_eq!(big(&BigInt::from(-3)), Value::from(-3));
        let huge: BigInt = BigInt::from(i64::MAX) * 4;
        assert_eq!(big(&huge), Value::from(huge.to_string()));
    }

    #[test]
    fn text_layout() {
        let v = serde_json::json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": true}]});
        assert_eq!(to_text(&v), "a: 1\nb:\n  c: [1, 2]\nd:\n  -\n    e: true\n");
    }
}
