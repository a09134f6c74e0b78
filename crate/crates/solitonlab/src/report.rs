//! Machine-readable output: JSON reports and CSV files with config sidecars.
//!
//! Every artifact embeds the tool version and the full run configuration so
//! a result can be reproduced from the file alone. CSVs stay strictly
//! tabular; their metadata lives in a `<file>.meta.json` sidecar.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Ordered key-value run configuration (BTreeMap keeps output deterministic).
pub type Config = BTreeMap<String, String>;

#[derive(Debug, Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'static str,
    config: &'a Config,
    report: T,
}

/// Serialize `payload` wrapped with version + config to pretty JSON.
pub fn json_report<T: Serialize>(config: &Config, payload: T) -> Result<String> {
    let env = Envelope {
        version: tool_version(),
        config,
        report: payload,
    };
    Ok(serde_json::to_string_pretty(&env)?)
}

pub fn write_json_report<T: Serialize>(path: &Path, config: &Config, payload: T) -> Result<()> {
    std::fs::write(path, json_report(config, payload)?)?;
    Ok(())
}

/// Write a CSV plus its `<file>.meta.json` sidecar carrying version + config.
pub fn write_csv_with_sidecar(path: &Path, csv_text: &str, config: &Config) -> Result<()> {
    std::fs::write(path, csv_text)?;
    let mut os = path.as_os_str().to_os_string();
    os.push(".meta.json");
    let sidecar: std::path::PathBuf = os.into();
    #[derive(Serialize)]
    struct Meta<'a> {
        version: &'static str,
        config: &'a Config,
    }
    std::fs::write(
        sidecar,
        serde_json::to_string_pretty(&Meta {
            version: tool_version(),
            config,
        })?,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_contains_version_and_config() {
        let mut cfg = Config::new();
        cfg.insert("tol".into(), "1e-10".into());
        let text = json_report(&cfg, serde_json::json!({"ok": true})).unwrap();
        assert!(text.contains("\"version\""));
        assert!(text.contains("\"tol\": \"1e-10\""));
        assert!(text.contains("\"ok\": true"));
    }

    #[test]
    fn neg_infinity_serializes_as_null() {
        let text = serde_json::to_string(&f64::NEG_INFINITY).unwrap();
        assert_eq!(text, "null");
    }
}
