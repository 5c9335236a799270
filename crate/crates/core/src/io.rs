//! The JSON code file format.
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "n": 4,
//!   "x_generators": [[0, 1, 2, 3]],
//!   "z_generators": [[0, 1], [2, 3]],
//!   "metadata": {"name": "example"}
//! }
//! ```
//!
//! Qubit indices are 0-based and strictly increasing within each generator.
//! Serialization is canonical: fixed field order, sorted metadata keys, two-space
//! indentation and a trailing newline. Qubit and generator labels live in the
//! metadata under [`QUBIT_LABELS_KEY`], [`X_LABELS_KEY`] and [`Z_LABELS_KEY`],
//! each holding a JSON-encoded list of strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::{CssCode, Labels};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = "1";
pub const QUBIT_LABELS_KEY: &str = "qubit_labels";
pub const X_LABELS_KEY: &str = "x_labels";
pub const Z_LABELS_KEY: &str = "z_labels";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub format_version: String,
    pub n: usize,
    pub x_generators: Vec<Vec<usize>>,
    pub z_generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Field {
        field: field.into(),
        message: message.into(),
    }
}

impl CodeFile {
    /// Parses and structurally checks a document. Commutation is not checked.
    pub fn parse(text: &str) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m).to_string();
            Error::Parse {
                line: e.line(),
                column: e.column(),
                message,
            }
        })?;
        file.check()?;
        Ok(file)
    }

    fn check(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(field_error(
                "format_version",
                format!("unsupported version {:?}, expected {FORMAT_VERSION:?}", self.format_version),
            ));
        }
        for (name, gens) in [("x_generators", &self.x_generators), ("z_generators", &self.z_generators)] {
            for (i, g) in gens.iter().enumerate() {
                if let Some(&q) = g.iter().find(|&&q| q >= self.n) {
                    return Err(field_error(
                        format!("{name}[{i}]"),
                        format!("qubit index {q} out of range for n = {}", self.n),
                    ));
                }
                if g.windows(2).any(|p| p[0] >= p[1]) {
                    return Err(field_error(format!("{name}[{i}]"), "indices must be strictly increasing"));
                }
            }
        }
        Ok(())
    }

    pub fn from_code(code: &CssCode) -> Self {
        let mut metadata = BTreeMap::new();
        if let Some(l) = code.labels() {
            for (key, list) in [(QUBIT_LABELS_KEY, &l.qubits), (X_LABELS_KEY, &l.x), (Z_LABELS_KEY, &l.z)] {
                metadata.insert(key.to_string(), serde_json::to_string(list).expect("strings serialize"));
            }
        }
        CodeFile {
            format_version: FORMAT_VERSION.to_string(),
            n: code.n(),
            x_generators: code.x_gens().row_supports(),
            z_generators: code.z_gens().row_supports(),
            metadata,
        }
    }

    /// Like [`CodeFile::from_code`], with extra metadata entries added.
    pub fn from_code_with(code: &CssCode, extra: impl IntoIterator<Item = (String, String)>) -> Self {
        let mut file = Self::from_code(code);
        file.metadata.extend(extra);
        file
    }

    pub fn to_code(&self) -> Result<CssCode> {
        self.check()?;
        let code = CssCode::from_supports(self.n, &self.x_generators, &self.z_generators)?;
        let keys = [QUBIT_LABELS_KEY, X_LABELS_KEY, Z_LABELS_KEY];
        let present = keys.iter().filter(|k| self.metadata.contains_key(**k)).count();
        if present == 0 {
            return Ok(code);
        }
        if present < keys.len() {
            return Err(field_error("metadata", "labels need all of qubit_labels, x_labels and z_labels"));
        }
        let decode = |key: &str| -> Result<Vec<String>> {
            serde_json::from_str(&self.metadata[key])
                .map_err(|e| field_error(format!("metadata.{key}"), e.to_string()))
        };
        let labels = Labels {
            qubits: decode(QUBIT_LABELS_KEY)?,
            x: decode(X_LABELS_KEY)?,
            z: decode(Z_LABELS_KEY)?,
        };
        code.with_labels(labels)
            .map_err(|e| field_error("metadata", e.to_string()))
    }

    /// Canonical text: pretty JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("code file serializes");
        s.push('\n');
        s
    }
}

/// Parses a document into a code, keeping labels but dropping other metadata.
pub fn parse_code(text: &str) -> Result<CssCode> {
    CodeFile::parse(text)?.to_code()
}

pub fn serialize_code(code: &CssCode) -> String {
    CodeFile::from_code(code).to_json()
}

pub fn read_code_file(path: &Path) -> Result<CodeFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    CodeFile::parse(&text)
}

pub fn write_code_file(path: &Path, file: &CodeFile) -> Result<()> {
    std::fs::write(path, file.to_json())
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}
