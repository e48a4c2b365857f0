//! Output records.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated, usually because of a budget; `reason` says why.
    Skipped,
    /// Diagnostic value with no pass/fail meaning.
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Info => "info",
        }
    }

    pub fn check(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// What was evaluated. Sum instances carry the polynomial and character;
/// counting instances carry subgroup orders; random set instances carry the
/// seed that regenerates them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exponents: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Instance {
    pub fn prime(p: u64) -> Self {
        Self {
            p,
            ..Self::default()
        }
    }

    /// `"a,k;b,l;..."`, the CLI polynomial syntax.
    pub fn poly_text(&self) -> String {
        self.coefficients
            .iter()
            .zip(&self.exponents)
            .map(|(a, k)| format!("{a},{k}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: u32,
    pub seq: u64,
    pub suite: String,
    pub quantity: String,
    pub instance: Instance,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
    /// CLI invocation that re-evaluates this record alone.
    pub rerun: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl ResultRecord {
    pub fn new(suite: &str, quantity: &str, instance: Instance, rerun: String) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            seq: 0,
            suite: suite.to_string(),
            quantity: quantity.to_string(),
            instance,
            status: Status::Info,
            value: None,
            reference: None,
            ratio: None,
            regime: None,
            reason: None,
            details: Value::Null,
            rerun,
            wall_ms: None,
        }
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn value(mut self, value: f64) -> Self {
        self.value = Some(value);
        self
    }

    pub fn reference(mut self, reference: f64) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn ratio(mut self, ratio: f64) -> Self {
        self.ratio = Some(ratio);
        self
    }

    pub fn regime(mut self, regime: impl Into<String>) -> Self {
        self.regime = Some(regime.into());
        self
    }

    pub fn reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn skipped(self, reason: impl Into<String>) -> Self {
        self.status(Status::Skipped).reason(reason)
    }
}

/// First line of a JSONL dataset; the only line that varies between runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub schema: u32,
    pub generated_at: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeaderLine {
    pub header: Header,
}

/// Flat row for the CSV mirror.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow<'a> {
    pub seq: u64,
    pub suite: &'a str,
    pub quantity: &'a str,
    pub p: u64,
    pub poly: String,
    pub j: Option<u64>,
    pub orders: String,
    pub lambda: Option<u64>,
    pub seed: Option<u64>,
    pub status: &'a str,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    pub ratio: Option<f64>,
    pub regime: Option<&'a str>,
    pub winner: Option<String>,
    pub reason: Option<&'a str>,
    pub wall_ms: Option<f64>,
}

impl ResultRecord {
    pub fn csv_row(&self) -> CsvRow<'_> {
        CsvRow {
            seq: self.seq,
            suite: &self.suite,
            quantity: &self.quantity,
            p: self.instance.p,
            poly: self.instance.poly_text(),
            j: self.instance.j,
            orders: self
                .instance
                .orders
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            lambda: self.instance.lambda,
            seed: self.instance.seed,
            status: self.status.as_str(),
            value: self.value,
            reference: self.reference,
            ratio: self.ratio,
            regime: self.regime.as_deref(),
            winner: self
                .details
                .get("winner")
                .and_then(Value::as_str)
                .map(str::to_string),
            reason: self.reason.as_deref(),
            wall_ms: self.wall_ms,
        }
    }
}
