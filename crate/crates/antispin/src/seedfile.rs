//! JSON seed files: `{"matrix": [[[re, im], ...], ...], "label": "..."}`.

use std::fs;
use std::path::Path;

use antispin_core::{ComplexMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedFile {
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SeedFile {
    pub fn from_matrix(m: &ComplexMatrix, label: Option<String>) -> Self {
        let matrix = (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| [m[(r, c)].re, m[(r, c)].im])
                    .collect()
            })
            .collect();
        Self { matrix, label }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        file.to_matrix()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("seed files always serialize");
        fs::write(path, text + "\n").map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// The 4×4 matrix, checking the shape.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        if self.matrix.len() != 4 || self.matrix.iter().any(|row| row.len() != 4) {
            let shape: Vec<usize> = self.matrix.iter().map(Vec::len).collect();
            return Err(CliError::Parse(format!(
                "matrix must have 4 rows of 4 entries, found rows of lengths {shape:?}"
            )));
        }
        let entries = self
            .matrix
            .iter()
            .flatten()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        Ok(ComplexMatrix::new(4, 4, entries).expect("shape checked"))
    }
}
