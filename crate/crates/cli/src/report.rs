use serde::Serialize;
use serde_json::Value;

use crate::format::InputDigest;

/// Machine-readable result of one command. Contains no timestamps or host data, so equal
/// inputs, flags and seeds give byte-identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub diagnostics: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            tool: "fermigauss",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: Vec::new(),
            seed: None,
            method: None,
            diagnostics: Value::Object(Default::default()),
            results: Value::Null,
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
