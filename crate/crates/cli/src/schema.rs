//! The bundled JSON schema and validation of documents and reports against it.
//!
//! The schema file keeps one definition per document or report kind under
//! `$defs`. Setting `SKELETON_SCHEMA_PATH` replaces the bundled file.

use std::path::PathBuf;

use serde_json::{json, Value};
use thiserror::Error;

/// The schema shipped with the binary.
pub const BUNDLED: &str = include_str!("../schema/spherical.schema.json");

/// Environment variable naming a schema file that replaces [`BUNDLED`].
pub const SCHEMA_ENV: &str = "SKELETON_SCHEMA_PATH";

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("cannot read schema {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("schema is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema does not compile: {0}")]
    Compile(String),
}

/// The schema in effect: the file named by `SKELETON_SCHEMA_PATH`, or the bundled one.
pub fn load() -> Result<Value, SchemaError> {
    match std::env::var_os(SCHEMA_ENV) {
        Some(path) => {
            let path = PathBuf::from(path);
            let text = std::fs::read_to_string(&path).map_err(|source| SchemaError::Read { path, source })?;
            Ok(serde_json::from_str(&text)?)
        }
        None => Ok(serde_json::from_str(BUNDLED)?),
    }
}

/// Validates `instance` against the definition `def` of `schema`, or against
/// the whole schema when it has no such definition. Returns one message per
/// failed constraint.
pub fn validate(schema: &Value, def: &str, instance: &Value) -> Result<Vec<String>, SchemaError> {
    let target = match schema.get("$defs").and_then(|d| d.get(def)) {
        Some(_) => {
            let mut root = json!({ "$ref": format!("#/$defs/{def}") });
            for key in ["$schema", "$defs"] {
                if let Some(v) = schema.get(key) {
                    root[key] = v.clone();
                }
            }
            root
        }
        None => schema.clone(),
    };
    let validator = jsonschema::validator_for(&target).map_err(|e| SchemaError::Compile(e.to_string()))?;
    Ok(validator
        .iter_errors(instance)
        .map(|e| {
            let at = e.instance_path().to_string();
            if at.is_empty() {
                e.to_string()
            } else {
                format!("{at}: {e}")
            }
        })
        .collect())
}
