use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::{linear_transfer, CertaintyScore, SentenceScorer};
use crate::corpus::{LineWarning, SentenceSpan};
use crate::error::{Error, Result};

/// Sentence scores produced by an external model, already transferred onto
/// [1, 3].
#[derive(Debug, Clone, Default)]
pub struct ExternalScores {
    pub scorer: String,
    pub scores: BTreeMap<(String, usize), CertaintyScore>,
    /// Rows skipped because the raw score was not a number.
    pub line_errors: Vec<LineWarning>,
}

impl ExternalScores {
    pub fn get(&self, paper_id: &str, index: usize) -> Option<&CertaintyScore> {
        self.scores.get(&(paper_id.to_owned(), index))
    }
}

impl SentenceScorer for ExternalScores {
    fn label(&self) -> &str {
        &self.scorer
    }

    fn score(&self, span: &SentenceSpan) -> Result<CertaintyScore> {
        self.get(&span.paper_id, span.index).cloned().ok_or_else(|| {
            Error::Invalid(format!(
                "no external score for sentence {} of paper {}",
                span.index, span.paper_id
            ))
        })
    }
}

/// Reads a TSV of `paper_id, sentence_index, raw_score` and maps every raw
/// score from `[raw_min, raw_max]` onto [1, 3]. An optional header row and
/// `#` comments are ignored. A repeated key is fatal.
pub fn load_external_scores(
    path: impl AsRef<Path>,
    scorer: &str,
    raw_min: f64,
    raw_max: f64,
) -> Result<ExternalScores> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_external_scores(&text, path, scorer, raw_min, raw_max)
}

pub(crate) fn parse_external_scores(
    text: &str,
    path: &Path,
    scorer: &str,
    raw_min: f64,
    raw_max: f64,
) -> Result<ExternalScores> {
    // validates the range even for an empty file
    linear_transfer(raw_min, raw_min, raw_max)?;
    let mut out = ExternalScores {
        scorer: scorer.to_owned(),
        ..Default::default()
    };
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if line_no == 1 && cols.first() == Some(&"paper_id") {
            continue;
        }
        let [paper_id, index, raw] = cols[..] else {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: line_no,
                message: format!("expected 3 columns, found {}", cols.len()),
            });
        };
        let index: usize = index.parse().map_err(|_| Error::Parse {
            path: path.to_owned(),
            line: line_no,
            message: format!("sentence_index {index:?} is not an integer"),
        })?;
        let raw: f64 = match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => {
                log::warn!("{}:{line_no}: raw score {raw:?} is not a number", path.display());
                out.line_errors.push(LineWarning {
                    line: line_no,
                    reason: format!("raw score {raw:?} is not a number"),
                });
                continue;
            }
        };
        let key = (paper_id.to_owned(), index);
        if out.scores.contains_key(&key) {
            return Err(Error::DuplicateKey(format!("{paper_id}/{index}")));
        }
        let value = linear_transfer(raw, raw_min, raw_max)?;
        out.scores.insert(key, CertaintyScore::new(value, scorer, raw)?);
    }
    Ok(out)
}
