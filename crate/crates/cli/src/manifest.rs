//! Provenance block embedded in every JSON report.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    /// SHA-256 of the effective arguments (config entries followed by flags).
    pub config_hash: String,
    pub tool_version: String,
    /// RFC 3339 UTC; taken from `SOURCE_DATE_EPOCH` when set.
    pub timestamp: String,
    pub input: Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn timestamp() -> String {
    let secs = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs() as i64).unwrap_or(0));
    OffsetDateTime::from_unix_timestamp(secs)
        .ok()
        .and_then(|t| t.format(&Rfc3339).ok())
        .unwrap_or_else(|| "1970-01-01T00:00:00Z".into())
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, effective_args: &[String], input: Value) -> Self {
        Self {
            command_line,
            config_hash: sha256_hex(effective_args.join("\n").as_bytes()),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            input,
        }
    }
}
