//! Per-check records shared by every verification routine.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// Exact residual (max-norm), written as a rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub elapsed_ms: u64,
}

impl Record {
    pub fn new(check: &str) -> Self {
        Record {
            check: check.to_string(),
            params: BTreeMap::new(),
            status: Status::Skip,
            residual: None,
            max_abs_error: None,
            note: None,
            elapsed_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn pass_if(mut self, ok: bool) -> Self {
        self.status = if ok { Status::Pass } else { Status::Fail };
        self
    }

    pub fn residual(mut self, r: impl ToString) -> Self {
        self.residual = Some(r.to_string());
        self
    }

    pub fn error(mut self, e: f64) -> Self {
        self.max_abs_error = Some(e);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    pub fn skip(mut self, why: impl Into<String>) -> Self {
        self.status = Status::Skip;
        self.note = Some(why.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Every non-skipped record passed, and at least one ran.
pub fn all_pass(records: &[Record]) -> bool {
    records.iter().any(|r| r.status != Status::Skip) && records.iter().all(|r| r.status != Status::Fail)
}
