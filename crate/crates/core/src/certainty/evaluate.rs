use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{MAX_CERTAINTY, MIN_CERTAINTY};
use crate::error::{Error, Result};
use crate::stats::{spearman, CorrResult};

/// Fixed-width bins over [1, 3].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn over_certainty_range(values: &[f64], bins: usize) -> Self {
        let bins = bins.max(1);
        let width = (MAX_CERTAINTY - MIN_CERTAINTY) / bins as f64;
        let edges = (0..=bins).map(|i| MIN_CERTAINTY + width * i as f64).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            let k = (((v - MIN_CERTAINTY) / width).floor() as isize).clamp(0, bins as isize - 1);
            counts[k as usize] += 1;
        }
        Self { edges, counts }
    }

    /// Normalized so that the bars integrate to one.
    pub fn density(&self) -> Vec<f64> {
        let total: usize = self.counts.iter().sum();
        if total == 0 {
            return vec![0.0; self.counts.len()];
        }
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, w)| c as f64 / (total as f64 * (w[1] - w[0])))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    /// `None` when the correlation is undefined (e.g. all labels identical).
    pub correlation: Option<CorrResult>,
    pub undefined_reason: Option<String>,
    pub histogram: Histogram,
}

pub const EVALUATION_BINS: usize = 20;

/// Agreement between sentence scores and 1/2/3 annotation labels.
pub fn evaluate_against_annotations(scores: &[f64], labels: &[u8]) -> Result<Evaluation> {
    if scores.len() != labels.len() {
        return Err(Error::Invalid(format!(
            "{} scores for {} annotations",
            scores.len(),
            labels.len()
        )));
    }
    if labels.len() < 3 {
        return Err(Error::Invalid("need at least 3 annotated sentences".into()));
    }
    if let Some(bad) = labels.iter().find(|l| !(1..=3).contains(*l)) {
        return Err(Error::Invalid(format!("annotation label {bad} not in 1..3")));
    }
    let label_values: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();
    let (correlation, undefined_reason) = match spearman(scores, &label_values) {
        Ok(r) => (Some(r), None),
        Err(Error::Undefined(why)) => (None, Some(why)),
        Err(e) => return Err(e),
    };
    Ok(Evaluation {
        correlation,
        undefined_reason,
        histogram: Histogram::over_certainty_range(scores, EVALUATION_BINS),
    })
}

/// TSV of `sentence_text, label`.
pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<(String, u8)>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((sentence, label)) = line.rsplit_once('\t') else {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: "expected sentence<TAB>label".into(),
            });
        };
        if i == 0 && label.trim() == "label" {
            continue;
        }
        let label: u8 = label
            .trim()
            .parse()
            .ok()
            .filter(|l| (1..=3).contains(l))
            .ok_or_else(|| Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: format!("label {label:?} is not 1, 2 or 3"),
            })?;
        out.push((sentence.to_owned(), label));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_and_reversed_agreement() {
        let labels = [1u8, 2, 3, 1, 3, 2];
        let same: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();
        let rev: Vec<f64> = labels.iter().map(|&l| 4.0 - f64::from(l)).collect();
        let e = evaluate_against_annotations(&same, &labels).unwrap();
        assert!((e.correlation.unwrap().coefficient - 1.0).abs() < 1e-12);
        let e = evaluate_against_annotations(&rev, &labels).unwrap();
        assert!((e.correlation.unwrap().coefficient + 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_labels_are_undefined() {
        let e = evaluate_against_annotations(&[1.0, 2.0, 3.0], &[2, 2, 2]).unwrap();
        assert!(e.correlation.is_none());
        assert!(e.undefined_reason.is_some());
    }

    #[test]
    fn histogram_counts_every_value() {
        let h = Histogram::over_certainty_range(&[1.0, 1.05, 2.0, 3.0], 4);
        assert_eq!(h.counts, vec![2, 0, 1, 1]);
        let area: f64 = h.density().iter().map(|d| d * 0.5).sum();
        assert!((area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(evaluate_against_annotations(&[1.0, 2.0], &[1, 2]).is_err());
        assert!(evaluate_against_annotations(&[1.0, 2.0, 3.0], &[1, 2, 4]).is_err());
    }
}
