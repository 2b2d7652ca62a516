//! Sentence-level language certainty on the annotation scale [1, 3]
//! (1 = least certain, 3 = most certain) and its summary per paper.

mod evaluate;
mod external;
mod hedge;

use serde::{Deserialize, Serialize};

use crate::corpus::SentenceSpan;
use crate::error::{Error, Result};

pub use evaluate::{evaluate_against_annotations, load_annotations, Evaluation, Histogram, EVALUATION_BINS};
pub use external::{load_external_scores, ExternalScores};
pub use hedge::{HedgeLexicon, HedgeScorer, DEFAULT_HEDGE_CAP};

pub const MIN_CERTAINTY: f64 = 1.0;
pub const MAX_CERTAINTY: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertaintyScore {
    pub value: f64,
    pub scorer: String,
    /// Model output before the transfer onto [1, 3].
    pub raw: f64,
}

impl CertaintyScore {
    pub fn new(value: f64, scorer: impl Into<String>, raw: f64) -> Result<Self> {
        if !(MIN_CERTAINTY..=MAX_CERTAINTY).contains(&value) {
            return Err(Error::Invalid(format!("certainty {value} outside [1, 3]")));
        }
        Ok(Self {
            value,
            scorer: scorer.into(),
            raw,
        })
    }
}

/// Produces a certainty score for one sentence.
pub trait SentenceScorer: Sync {
    fn label(&self) -> &str;
    fn score(&self, span: &SentenceSpan) -> Result<CertaintyScore>;
}

/// Affine map sending `raw_min` to 1 and `raw_max` to 3. Inputs outside the
/// range are clamped with a warning.
pub fn linear_transfer(raw: f64, raw_min: f64, raw_max: f64) -> Result<f64> {
    if !(raw_max > raw_min) || !raw_min.is_finite() || !raw_max.is_finite() {
        return Err(Error::DegenerateRange {
            min: raw_min,
            max: raw_max,
        });
    }
    if raw.is_nan() {
        return Err(Error::Invalid("raw score is NaN".into()));
    }
    let clamped = raw.clamp(raw_min, raw_max);
    if clamped != raw {
        log::warn!("raw score {raw} outside [{raw_min}, {raw_max}]; clamped");
    }
    let span = MAX_CERTAINTY - MIN_CERTAINTY;
    let value = MIN_CERTAINTY + span * (clamped - raw_min) / (raw_max - raw_min);
    Ok(value.clamp(MIN_CERTAINTY, MAX_CERTAINTY))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummaryPolicy {
    /// A single uncertain conclusion marks the whole paper as uncertain.
    #[default]
    Min,
    Mean,
}

/// Paper certainty from the scores of its conclusion sentences.
pub fn summarize_paper(scores: &[CertaintyScore], policy: SummaryPolicy) -> Result<CertaintyScore> {
    let first = scores
        .first()
        .ok_or_else(|| Error::Invalid("cannot summarize a paper without conclusion scores".into()))?;
    match policy {
        SummaryPolicy::Min => {
            let lowest = scores
                .iter()
                .min_by(|a, b| a.value.total_cmp(&b.value))
                .unwrap_or(first);
            Ok(lowest.clone())
        }
        SummaryPolicy::Mean => {
            let n = scores.len() as f64;
            // averaging offsets from the minimum keeps a constant set exact
            let lo = scores.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
            let value = lo + scores.iter().map(|s| s.value - lo).sum::<f64>() / n;
            let raw = scores.iter().map(|s| s.raw).sum::<f64>() / n;
            // rounding can push a mean of in-range values a hair outside
            let value = value.clamp(MIN_CERTAINTY, MAX_CERTAINTY);
            CertaintyScore::new(value, first.scorer.clone(), raw)
        }
    }
}
