use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Written next to every output so a run can be repeated exactly.
///
/// `args` is the full argument list with every default spelled out;
/// replaying it reproduces the data files byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    /// Resolved configuration, all defaults materialized.
    pub config: serde_json::Value,
    pub tool_version: String,
    /// UTC, ISO-8601.
    pub timestamp: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_and_omits_absent_seed() {
        let m = RunManifest {
            command: "sweep".into(),
            args: vec!["sweep".into(), "--n-min".into(), "1".into()],
            config: serde_json::json!({"n_min": 1}),
            tool_version: "0.1.0".into(),
            timestamp: "2026-01-01T00:00:00Z".into(),
            seed: None,
        };
        let text = m.to_json().unwrap();
        assert!(!text.contains("seed"));
        assert_eq!(RunManifest::from_json(&text).unwrap(), m);

        let seeded = RunManifest { seed: Some(7), ..m };
        assert_eq!(
            RunManifest::from_json(&seeded.to_json().unwrap()).unwrap().seed,
            Some(7)
        );
    }
}
