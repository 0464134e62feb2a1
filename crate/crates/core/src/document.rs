//! The JSON envelope shared by the CLI, the service and the golden files:
//! `{"version": "1", "spec": {"n": 2, "m": 3}, "diagonals": [[1,4], ...]}`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagset::DiagSet;
use crate::error::Error;
use crate::polygon::{Polygon, PolygonSpec};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub n: u32,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub version: String,
    pub spec: SpecDoc,
    pub diagonals: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported format version `{0}` (expected `{FORMAT_VERSION}`)")]
    Version(String),

    #[error("spec: {0}")]
    Spec(Error),

    #[error("diagonals[{index}] = [{a},{b}]: {reason}")]
    Diagonal {
        index: usize,
        a: u32,
        b: u32,
        reason: String,
    },
}

impl DocumentError {
    /// Offending `[a,b]` pairs, if the error is about one.
    pub fn offending(&self) -> Vec<[u32; 2]> {
        match self {
            DocumentError::Diagonal { a, b, .. } => vec![[*a, *b]],
            _ => Vec::new(),
        }
    }
}

impl ConfigDocument {
    pub fn from_set(poly: &Polygon, set: &DiagSet) -> ConfigDocument {
        let spec = poly.spec();
        ConfigDocument {
            version: FORMAT_VERSION.to_string(),
            spec: SpecDoc {
                n: spec.n(),
                m: spec.m(),
            },
            diagonals: poly.diagonals_of(set).iter().map(|d| d.endpoints()).collect(),
            name: None,
            notes: None,
        }
    }

    /// Parse and validate.
    pub fn parse(text: &str) -> Result<ConfigDocument, DocumentError> {
        let doc: ConfigDocument = serde_json::from_str(text).map_err(|e| DocumentError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn polygon_spec(&self) -> Result<PolygonSpec, DocumentError> {
        PolygonSpec::new(self.spec.n, self.spec.m).map_err(DocumentError::Spec)
    }

    pub fn validate(&self) -> Result<PolygonSpec, DocumentError> {
        if self.version != FORMAT_VERSION {
            return Err(DocumentError::Version(self.version.clone()));
        }
        let spec = self.polygon_spec()?;
        let mut seen = HashSet::new();
        for (index, &[a, b]) in self.diagonals.iter().enumerate() {
            let d = spec.n_diagonal(a, b).map_err(|e| DocumentError::Diagonal {
                index,
                a,
                b,
                reason: e.to_string(),
            })?;
            if !seen.insert(d) {
                return Err(DocumentError::Diagonal {
                    index,
                    a,
                    b,
                    reason: format!("duplicate of {d}"),
                });
            }
        }
        Ok(spec)
    }

    /// Members as a set over `poly`, which must match the document's spec.
    pub fn to_set(&self, poly: &Polygon) -> Result<DiagSet, DocumentError> {
        let spec = self.validate()?;
        if spec != poly.spec() {
            return Err(DocumentError::Spec(Error::SpecMismatch));
        }
        poly.set_from_pairs(self.diagonals.iter().map(|&[a, b]| (a, b)))
            .map_err(DocumentError::Spec)
    }
}
