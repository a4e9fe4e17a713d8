use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything one invocation produced, as written to stdout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub version: String,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunRecord {
    pub fn new(command: &str, inputs: Value, result: Value, wall_time_s: f64, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            result,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s,
            seed,
        }
    }
}
