//! Machine-readable report envelope shared by the CLI subcommands.

use serde::Serialize;

use crate::Window;

pub const SCHEMA_VERSION: u32 = 1;

/// Exit-code contract: mathematical truth is distinguished from operational
/// failure so batch verification scripts can branch on outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Everything checked came out verified/true.
    Verified,
    /// The computation succeeded and the answer is mathematically "no".
    False,
    /// Parsing failed, a window was unstable, or inputs were unusable.
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified => 0,
            Outcome::False => 1,
            Outcome::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    pub verified: bool,
    pub results: Vec<serde_json::Value>,
    pub witnesses: Vec<String>,
}

impl Report {
    pub fn new(command: &str, window: Option<Window>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            window,
            verified: true,
            results: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn push<T: Serialize>(&mut self, key: &str, value: &T) {
        let mut map = serde_json::Map::new();
        map.insert(
            key.to_string(),
            serde_json::to_value(value).expect("report values serialize"),
        );
        self.results.push(serde_json::Value::Object(map));
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.verified = false;
        self.witnesses.push(witness.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
