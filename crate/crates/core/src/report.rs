//! Outcome records for identity checks.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

/// Version tag carried by every emitted record.
pub const SCHEMA: &str = "carlitz-lab/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// A documented counterexample whose two sides differ, as they should.
    #[serde(rename = "expected-fail")]
    ExpectedFail,
    /// A documented counterexample whose two sides unexpectedly agree.
    #[serde(rename = "unexpected-pass")]
    UnexpectedPass,
    #[serde(rename = "CONJECTURE:confirmed-at-desk-scale")]
    ConjectureConfirmed,
    #[serde(rename = "CONJECTURE:refuted")]
    ConjectureRefuted,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ExpectedFail => "expected-fail",
            Status::UnexpectedPass => "unexpected-pass",
            Status::ConjectureConfirmed => "CONJECTURE:confirmed-at-desk-scale",
            Status::ConjectureRefuted => "CONJECTURE:refuted",
        }
    }

    /// Whether the outcome is what a correct implementation produces.
    /// A refuted conjecture is a finding, not a defect.
    pub fn is_ok(self) -> bool {
        !matches!(self, Status::Fail | Status::UnexpectedPass)
    }

    pub fn from_comparison(equal: bool, expect_fail: bool) -> Status {
        match (equal, expect_fail) {
            (true, false) => Status::Pass,
            (false, false) => Status::Fail,
            (false, true) => Status::ExpectedFail,
            (true, true) => Status::UnexpectedPass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub id: String,
    pub params: Value,
    pub lhs: Value,
    pub rhs: Value,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Check-specific extras (bounds, counters, notes).
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub extra: Map<String, Value>,
}

impl VerifyReport {
    /// Builds a report from the two sides; on disagreement the sides become
    /// the witness.
    pub fn compare(id: &str, params: Value, lhs: Value, rhs: Value, equal: bool, expect_fail: bool) -> Self {
        let status = Status::from_comparison(equal, expect_fail);
        let witness = (!equal).then(|| json!({ "lhs": lhs.clone(), "rhs": rhs.clone() }));
        VerifyReport { id: id.to_string(), params, lhs, rhs, status, witness, extra: Map::new() }
    }

    pub fn with_extra(mut self, key: &str, value: Value) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn is_ok(&self) -> bool {
        self.status.is_ok()
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").insert("schema".into(), json!(SCHEMA));
        v
    }

    pub fn from_json(v: &Value) -> serde_json::Result<Self> {
        serde_json::from_value(v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_table() {
        assert_eq!(Status::from_comparison(true, false), Status::Pass);
        assert_eq!(Status::from_comparison(false, true), Status::ExpectedFail);
        assert!(!Status::from_comparison(true, true).is_ok());
        assert!(!Status::Fail.is_ok());
        assert!(Status::ConjectureRefuted.is_ok());
    }

    #[test]
    fn json_round_trip() {
        let r = VerifyReport::compare("thm1", json!({"q": 3}), json!("1"), json!("2"), false, true)
            .with_extra("note", json!("x"));
        let v = r.to_json();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["status"], "expected-fail");
        assert_eq!(v["witness"]["lhs"], "1");
        assert_eq!(VerifyReport::from_json(&v).unwrap(), r);
        let ok = VerifyReport::compare("x", json!({}), json!(1), json!(1), true, false);
        assert!(ok.to_json().get("witness").is_none());
    }
}
