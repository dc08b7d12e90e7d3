//! On-disk report formats: JSON envelopes with a fixed schema and CSV with
//! full-precision doubles.
//!
//! Serialization is deterministic: field order follows the struct
//! definitions, there are no map-backed containers, and the timestamp is
//! injected by the caller so identical inputs produce byte-identical files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regions::{Region, Verdict};
use crate::verify::{NamedValue, VerificationReport};

/// Version of the JSON schema written and accepted by this crate.
pub const SCHEMA_VERSION: u32 = 1;

/// Wrapper around every JSON document the tool emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    /// Timestamp text supplied by the caller.
    pub created_at: String,
    pub tool_version: String,
    pub body: ReportBody,
}

/// The document kinds an envelope can carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportBody {
    Verification(VerificationReport),
    Constants(ConstantsDoc),
    Classification(ClassificationDoc),
}

/// The closed-form and numerically derived constants defined at a parameter
/// point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsDoc {
    pub params: Vec<NamedValue>,
    pub constants: Vec<ConstantEntry>,
}

/// One constant: its defining label, whether the value is closed-form or
/// numerically derived, and the value itself (absent when the constant is
/// not defined at the given parameters).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantEntry {
    pub name: String,
    pub label: String,
    pub derivation: String,
    pub value: Option<f64>,
}

/// Phase-plane classification of a parameter point with all four verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationDoc {
    pub params: Vec<NamedValue>,
    pub region: Region,
    pub on_curve: bool,
    pub admissible: bool,
    pub fujita_lambda0: Option<f64>,
    pub verdicts: VerdictSet,
}

/// Verdicts for the four problem variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictSet {
    pub super_problem: Verdict,
    pub approximate: Verdict,
    pub sub_problem: Verdict,
    pub exact: Verdict,
}

impl ReportEnvelope {
    pub fn new(created_at: String, tool_version: String, body: ReportBody) -> Self {
        ReportEnvelope {
            schema_version: SCHEMA_VERSION,
            created_at,
            tool_version,
            body,
        }
    }

    /// Serialized reports are evidence; NaN or infinity anywhere is an
    /// error, never silently encoded.
    pub fn validate_finite(&self) -> Result<()> {
        match &self.body {
            ReportBody::Verification(report) => report.validate_finite(),
            ReportBody::Constants(doc) => {
                for p in &doc.params {
                    check_finite(&p.name, p.value)?;
                }
                for c in &doc.constants {
                    if let Some(v) = c.value {
                        check_finite(&c.name, v)?;
                    }
                }
                Ok(())
            }
            ReportBody::Classification(doc) => {
                for p in &doc.params {
                    check_finite(&p.name, p.value)?;
                }
                if let Some(v) = doc.fujita_lambda0 {
                    check_finite("fujita_lambda0", v)?;
                }
                Ok(())
            }
        }
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::Schema(format!("non-finite number in field {name}")));
    }
    Ok(())
}

/// Serializes an envelope to pretty JSON after the finiteness check.
pub fn to_json_string(envelope: &ReportEnvelope) -> Result<String> {
    envelope.validate_finite()?;
    serde_json::to_string_pretty(envelope)
        .map_err(|e| Error::Schema(format!("serialization failed: {e}")))
}

/// Parses and validates an envelope from JSON text. Unknown fields and
/// foreign schema versions are rejected.
pub fn from_json_str(text: &str) -> Result<ReportEnvelope> {
    let envelope: ReportEnvelope =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("parse error: {e}")))?;
    if envelope.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema_version {}, this build reads version {SCHEMA_VERSION}",
            envelope.schema_version
        )));
    }
    Ok(envelope)
}

/// Writes an envelope to disk; I/O failures carry the path.
pub fn write_json(envelope: &ReportEnvelope, destination: &Path) -> Result<()> {
    let text = to_json_string(envelope)?;
    std::fs::write(destination, text.as_bytes()).map_err(|e| Error::Io {
        path: destination.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads an envelope back from disk.
pub fn read_json(source: &Path) -> Result<ReportEnvelope> {
    let text = std::fs::read_to_string(source).map_err(|e| Error::Io {
        path: source.display().to_string(),
        message: e.to_string(),
    })?;
    from_json_str(&text)
}

/// Formats a double with 17 significant digits, enough to round-trip
/// exactly. Non-finite values are rejected.
pub fn csv_f64(v: f64) -> Result<String> {
    if !v.is_finite() {
        return Err(Error::Schema(format!("non-finite number in CSV output: {v}")));
    }
    Ok(format!("{v:.16e}"))
}

fn escape_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders header and rectangular rows as RFC-style CSV text.
pub fn csv_to_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut out = String::new();
    out.push_str(&header.iter().map(|h| escape_field(h)).collect::<Vec<_>>().join(","));
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::Schema(format!(
                "row {i} has {} fields, header has {}",
                row.len(),
                header.len()
            )));
        }
        out.push_str(&row.iter().map(|f| escape_field(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Writes CSV to disk.
pub fn write_csv(destination: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let text = csv_to_string(header, rows)?;
    std::fs::write(destination, text.as_bytes()).map_err(|e| Error::Io {
        path: destination.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::RatioResults;

    fn sample_report() -> VerificationReport {
        VerificationReport {
            kind: "identity-lemma31".to_string(),
            params: vec![NamedValue::new("alpha", 0.7)],
            paper_refs: vec!["L1.1".to_string()],
            grid: None,
            results: RatioResults {
                min_ratio: 1.0,
                max_ratio: 1.0,
                arg_min: None,
                arg_max: None,
                tolerance: 1e-8,
                stability: None,
                notes: vec!["lhs = 1, rhs = 1".to_string()],
            },
            pass: true,
        }
    }

    fn sample_envelope() -> ReportEnvelope {
        ReportEnvelope::new(
            "2000-01-01T00:00:00Z".to_string(),
            "0.1.0".to_string(),
            ReportBody::Verification(sample_report()),
        )
    }

    #[test]
    fn json_round_trip_is_structural_identity() {
        let envelope = sample_envelope();
        let text = to_json_string(&envelope).unwrap();
        let back = from_json_str(&text).unwrap();
        assert_eq!(envelope, back);
        // Version is a bare integer in the serialized text.
        assert!(text.contains("\"schema_version\": 1"));
    }

    #[test]
    fn identical_inputs_serialize_identically() {
        let a = to_json_string(&sample_envelope()).unwrap();
        let b = to_json_string(&sample_envelope()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_finite_numbers_are_rejected() {
        let mut envelope = sample_envelope();
        if let ReportBody::Verification(report) = &mut envelope.body {
            report.results.max_ratio = f64::NAN;
        }
        assert!(to_json_string(&envelope).is_err());
        if let ReportBody::Verification(report) = &mut envelope.body {
            report.results.max_ratio = f64::INFINITY;
        }
        assert!(to_json_string(&envelope).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = to_json_string(&sample_envelope()).unwrap();
        let patched = text.replacen(
            "\"schema_version\": 1,",
            "\"schema_version\": 1, \"surprise\": true,",
            1,
        );
        let err = from_json_str(&patched).unwrap_err();
        assert!(err.to_string().contains("surprise"), "{err}");
    }

    #[test]
    fn truncated_documents_fail_to_parse() {
        let text = to_json_string(&sample_envelope()).unwrap();
        assert!(from_json_str(&text[..text.len() / 2]).is_err());
    }

    #[test]
    fn foreign_schema_versions_are_rejected() {
        let text = to_json_string(&sample_envelope()).unwrap();
        let patched = text.replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
        let err = from_json_str(&patched).unwrap_err();
        assert!(err.to_string().contains("schema_version 2"), "{err}");
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("report-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("report.json");
        let envelope = sample_envelope();
        write_json(&envelope, &path).unwrap();
        assert_eq!(read_json(&path).unwrap(), envelope);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn csv_formatting_and_shape_checks() {
        let v = 0.1 + 0.2;
        let formatted = csv_f64(v).unwrap();
        assert_eq!(formatted.parse::<f64>().unwrap(), v);
        assert!(csv_f64(f64::NAN).is_err());

        let text = csv_to_string(
            &["lambda", "region"],
            &[vec![csv_f64(1.5).unwrap(), "C".to_string()]],
        )
        .unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "lambda,region");
        assert_eq!(lines.next().unwrap().split(',').count(), 2);

        assert!(csv_to_string(&["a"], &[vec!["1".to_string(), "2".to_string()]]).is_err());
    }

    #[test]
    fn csv_escapes_delimiters() {
        let text = csv_to_string(&["note"], &[vec!["a,b \"quoted\"".to_string()]]).unwrap();
        assert!(text.contains("\"a,b \"\"quoted\"\"\""));
    }
}
