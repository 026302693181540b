//! JSON file formats for mutation sequences.
//!
//! A sequence file holds `{"B": [[...]], "m": [1, 2], "sigma": ["id", "(1 2)"]}`
//! with 1-based indices. `sigma` entries are cycle strings, `"id"`, or
//! one-line arrays such as `[2, 1]`; a missing `sigma` means identities.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cluster::{ExchangeMatrix, MutationSequence, Permutation};
use crate::error::{Error, Result};
use crate::geometry::TriangulationFile;
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermutationSpec {
    Text(String),
    OneLine(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    pub m: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<PermutationSpec>>,
}

impl SequenceFile {
    pub fn to_sequence(&self) -> Result<MutationSequence> {
        let b = ExchangeMatrix::new(IntMatrix::from_rows(self.b.clone())?)?;
        let n = b.n();
        let sigma = match &self.sigma {
            None => vec![Permutation::identity(n); self.m.len()],
            Some(specs) => specs
                .iter()
                .map(|s| match s {
                    PermutationSpec::Text(t) => Permutation::parse(t, n),
                    PermutationSpec::OneLine(v) => Permutation::from_one_line(v),
                })
                .collect::<Result<_>>()?,
        };
        MutationSequence::new(b, &self.m, sigma)
    }

    pub fn from_sequence(gamma: &MutationSequence) -> Self {
        SequenceFile {
            b: gamma.b.matrix().to_rows(),
            m: gamma.m_one_based(),
            sigma: Some(gamma.sigma.iter().map(|s| PermutationSpec::Text(s.to_string())).collect()),
        }
    }
}

/// Any input accepted by commands that only need an exchange matrix.
#[derive(Clone, Debug)]
pub enum MatrixSource {
    Sequence(MutationSequence),
    Triangulation(TriangulationFile),
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_sequence(text: &str) -> Result<MutationSequence> {
    parse_json::<SequenceFile>(text)?.to_sequence()
}

pub fn read_sequence(path: &Path) -> Result<MutationSequence> {
    parse_sequence(&read_text(path)?)
}

pub fn read_triangulation(path: &Path) -> Result<TriangulationFile> {
    parse_json(&read_text(path)?)
}

/// A sequence file, or a triangulation file when it has `"edges"`.
pub fn read_matrix_source(path: &Path) -> Result<MatrixSource> {
    let text = read_text(path)?;
    let value: serde_json::Value = parse_json(&text)?;
    if value.get("edges").is_some() {
        Ok(MatrixSource::Triangulation(parse_json(&text)?))
    } else {
        Ok(MatrixSource::Sequence(parse_sequence(&text)?))
    }
}

pub fn write_sequence(gamma: &MutationSequence) -> String {
    serde_json::to_string_pretty(&SequenceFile::from_sequence(gamma)).expect("serializable")
}
