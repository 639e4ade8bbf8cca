//! Run configuration: the JSON system-definition format consumed by the CLI.
//!
//! Schema (all floats are ordinary JSON numbers):
//!
//! ```json
//! {
//!   "system": { "kind": "explicit", "vectors": [[1,0],[0,1],[0.707,0.707]] },
//!   "truncation": 3,
//!   "band": [0.9, 1.1],
//!   "tolerances": { "rank_tol": 1e-12, "verify_tol": 1e-9, "band_eps": 1e-12 },
//!   "seed": 42,
//!   "out": "reports/"
//! }
//! ```
//!
//! `system.kind` is one of "explicit" (payload `vectors`), "sampled"
//! (payload `values`, `grid`, `rule`, optional `domain`), "kernel" (payload
//! `entries`, a finite table of p(i,j) values), "hilbert" (no payload), or
//! "covariance" (payload `matrix`). `band_eps` is relative to the largest
//! eigenvalue. Unknown keys anywhere are rejected outright: a config that
//! does not parse cleanly is a config whose results cannot be reproduced.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::systems::{make_sampled_on, QuadratureKind, QuadratureRule, SystemError, VectorSystem};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown key `{key}` in {context}")]
    UnknownKey { key: String, context: String },
    #[error("missing required key `{key}` in {context}")]
    MissingKey { key: String, context: String },
    #[error("invalid value for `{field}`: {message}")]
    InvalidValue { field: String, message: String },
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SystemConfig {
    Explicit {
        vectors: Vec<Vec<f64>>,
    },
    Sampled {
        values: Vec<Vec<f64>>,
        grid: Vec<f64>,
        rule: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Kernel {
        entries: Vec<Vec<f64>>,
    },
    Hilbert,
    Covariance {
        matrix: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    #[serde(default = "default_verify_tol")]
    pub verify_tol: f64,
    /// Relative to λ_max when selecting band eigenvalues.
    #[serde(default = "default_band_eps")]
    pub band_eps: f64,
}

fn default_rank_tol() -> f64 {
    1e-12
}
fn default_verify_tol() -> f64 {
    1e-9
}
fn default_band_eps() -> f64 {
    1e-12
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_tol: default_rank_tol(),
            verify_tol: default_verify_tol(),
            band_eps: default_band_eps(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<[f64; 2]>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

const TOP_KEYS: &[&str] = &["system", "truncation", "band", "tolerances", "seed", "out"];
const TOL_KEYS: &[&str] = &["rank_tol", "verify_tol", "band_eps"];

fn payload_keys(kind: &str) -> Option<&'static [&'static str]> {
    match kind {
        "explicit" => Some(&["kind", "vectors"]),
        "sampled" => Some(&["kind", "values", "grid", "rule", "domain"]),
        "kernel" => Some(&["kind", "entries"]),
        "hilbert" => Some(&["kind"]),
        "covariance" => Some(&["kind", "matrix"]),
        _ => None,
    }
}

fn audit_keys(obj: &Value, allowed: &[&str], context: &str) -> Result<(), ConfigError> {
    let Value::Object(map) = obj else {
        return Err(ConfigError::InvalidValue {
            field: context.to_string(),
            message: "expected a JSON object".into(),
        });
    };
    let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
    for key in map.keys() {
        if !allowed.contains(key.as_str()) {
            return Err(ConfigError::UnknownKey {
                key: key.clone(),
                context: context.to_string(),
            });
        }
    }
    Ok(())
}

impl RunConfig {
    /// Parse and validate a config document. Unknown keys fail fast, with
    /// the offending key named.
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let value: Value = serde_json::from_str(text)?;
        audit_keys(&value, TOP_KEYS, "the top-level config")?;
        let system = value.get("system").ok_or_else(|| ConfigError::MissingKey {
            key: "system".into(),
            context: "the top-level config".into(),
        })?;
        let kind =
            system
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| ConfigError::MissingKey {
                    key: "kind".into(),
                    context: "system".into(),
                })?;
        let allowed = payload_keys(kind).ok_or_else(|| ConfigError::InvalidValue {
            field: "system.kind".into(),
            message: format!(
                "`{kind}` is not one of explicit, sampled, kernel, hilbert, covariance"
            ),
        })?;
        audit_keys(system, allowed, "system")?;
        if let Some(tols) = value.get("tolerances") {
            audit_keys(tols, TOL_KEYS, "tolerances")?;
        }
        let config: RunConfig = serde_json::from_value(value)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.truncation < 1 {
            return Err(ConfigError::InvalidValue {
                field: "truncation".into(),
                message: "must be at least 1".into(),
            });
        }
        if let Some([a, b]) = self.band {
            let valid = a.is_finite() && b.is_finite() && a > 0.0 && b >= a;
            if !valid {
                return Err(ConfigError::InvalidValue {
                    field: "band".into(),
                    message: format!("[{a}, {b}] must satisfy 0 < a <= b < inf"),
                });
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("rank_tol", t.rank_tol),
            ("verify_tol", t.verify_tol),
            ("band_eps", t.band_eps),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(ConfigError::InvalidValue {
                    field: format!("tolerances.{name}"),
                    message: "must be a positive finite number".into(),
                });
            }
        }
        if let SystemConfig::Sampled { rule, .. } = &self.system {
            if QuadratureKind::parse(rule).is_none() {
                return Err(ConfigError::InvalidValue {
                    field: "system.rule".into(),
                    message: format!("`{rule}` is not one of trapezoid, simpson, gauss-legendre"),
                });
            }
        }
        Ok(())
    }

    /// Instantiate the vector system this config describes.
    pub fn build_system(&self) -> Result<VectorSystem, ConfigError> {
        Ok(match &self.system {
            SystemConfig::Explicit { vectors } => VectorSystem::explicit(vectors.clone())?,
            SystemConfig::Sampled {
                values,
                grid,
                rule,
                domain,
            } => {
                let kind = QuadratureKind::parse(rule).expect("validated");
                let rule = QuadratureRule::new(kind, grid.len());
                make_sampled_on(
                    values.clone(),
                    grid.clone(),
                    rule,
                    domain.map(|[a, b]| (a, b)),
                )?
            }
            SystemConfig::Kernel { entries } => {
                let n = entries.len();
                for (i, row) in entries.iter().enumerate() {
                    if row.len() != n {
                        return Err(ConfigError::InvalidValue {
                            field: "system.entries".into(),
                            message: format!("row {i} has {} entries, expected {n}", row.len()),
                        });
                    }
                }
                let table = entries.clone();
                VectorSystem::kernel_defined(move |i, j| table[i][j], Some(n))
            }
            SystemConfig::Hilbert => VectorSystem::hilbert_monomial(),
            SystemConfig::Covariance { matrix } => {
                let n = matrix.len();
                for (i, row) in matrix.iter().enumerate() {
                    if row.len() != n {
                        return Err(ConfigError::InvalidValue {
                            field: "system.matrix".into(),
                            message: format!("row {i} has {} entries, expected {n}", row.len()),
                        });
                    }
                }
                VectorSystem::covariance_field(crate::spectral::SymMatrix::from_rows(matrix))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_explicit_config() {
        let cfg = RunConfig::from_json_str(
            r#"{"system": {"kind": "explicit", "vectors": [[1,0],[0,1]]}, "truncation": 2}"#,
        )
        .unwrap();
        assert_eq!(cfg.truncation, 2);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.tolerances.rank_tol, 1e-12);
        assert!(matches!(
            cfg.build_system().unwrap(),
            VectorSystem::ExplicitFinite { .. }
        ));
    }

    #[test]
    fn rejects_unknown_top_level_key() {
        let err = RunConfig::from_json_str(
            r#"{"system": {"kind": "hilbert"}, "truncation": 5, "bogus": 1}"#,
        )
        .unwrap_err();
        match err {
            ConfigError::UnknownKey { key, .. } => assert_eq!(key, "bogus"),
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_payload_key() {
        let err = RunConfig::from_json_str(
            r#"{"system": {"kind": "hilbert", "vectors": []}, "truncation": 5}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { .. }));
    }

    #[test]
    fn rejects_unknown_kind() {
        let err = RunConfig::from_json_str(r#"{"system": {"kind": "mystery"}, "truncation": 5}"#)
            .unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
    }

    #[test]
    fn rejects_bad_band() {
        let err = RunConfig::from_json_str(
            r#"{"system": {"kind": "hilbert"}, "truncation": 5, "band": [2.0, 1.0]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
    }

    #[test]
    fn rejects_zero_truncation() {
        let err = RunConfig::from_json_str(r#"{"system": {"kind": "hilbert"}, "truncation": 0}"#)
            .unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
    }

    #[test]
    fn rejects_unknown_tolerance_key() {
        let err = RunConfig::from_json_str(
            r#"{"system": {"kind": "hilbert"}, "truncation": 5, "tolerances": {"rank_tol": 1e-9, "extra": 2}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { .. }));
    }

    #[test]
    fn builds_covariance_system() {
        let cfg = RunConfig::from_json_str(
            r#"{"system": {"kind": "covariance", "matrix": [[1.0, 0.5], [0.5, 2.0]]}, "truncation": 2}"#,
        )
        .unwrap();
        assert!(matches!(
            cfg.build_system().unwrap(),
            VectorSystem::CovarianceField { .. }
        ));
    }

    #[test]
    fn builds_sampled_system_with_rule() {
        let cfg = RunConfig::from_json_str(
            r#"{"system": {"kind": "sampled",
                           "values": [[1.0, 1.0, 1.0]],
                           "grid": [0.0, 0.5, 1.0],
                           "rule": "trapezoid"},
                "truncation": 1}"#,
        )
        .unwrap();
        let sys = cfg.build_system().unwrap();
        assert_eq!(crate::systems::inner_product(&sys, 0, 0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_rule_name() {
        let err = RunConfig::from_json_str(
            r#"{"system": {"kind": "sampled", "values": [[1.0]], "grid": [0.0], "rule": "midpoint"}, "truncation": 1}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
    }

    #[test]
    fn kernel_entries_must_be_square() {
        let cfg = RunConfig::from_json_str(
            r#"{"system": {"kind": "kernel", "entries": [[1.0, 0.0], [0.0]]}, "truncation": 2}"#,
        )
        .unwrap();
        assert!(matches!(
            cfg.build_system(),
            Err(ConfigError::InvalidValue { .. })
        ));
    }
}
