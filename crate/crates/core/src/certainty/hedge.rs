use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use super::{CertaintyScore, SentenceScorer, MAX_CERTAINTY, MIN_CERTAINTY};
use crate::corpus::SentenceSpan;
use crate::error::{Error, Result};
use crate::text::tokenize;

pub const DEFAULT_HEDGE_CAP: u32 = 3;

/// Set of hedge terms and phrases, stored as lowercased token sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct HedgeLexicon {
    entries: BTreeSet<Vec<String>>,
    pub source: String,
    // first token -> phrase lengths present, longest first
    by_head: HashMap<String, Vec<usize>>,
}

impl HedgeLexicon {
    pub fn new<I, S>(entries: I, source: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let entries: BTreeSet<Vec<String>> = entries
            .into_iter()
            .map(|e| tokenize(e.as_ref()))
            .filter(|t| !t.is_empty())
            .collect();
        if entries.is_empty() {
            return Err(Error::Invalid("hedge lexicon is empty".into()));
        }
        let mut by_head: HashMap<String, Vec<usize>> = HashMap::new();
        for e in &entries {
            by_head.entry(e[0].clone()).or_default().push(e.len());
        }
        for lens in by_head.values_mut() {
            lens.sort_unstable_by(|a, b| b.cmp(a));
            lens.dedup();
        }
        Ok(Self {
            entries,
            source: source.into(),
            by_head,
        })
    }

    /// One hedge per line; blank lines and `#` comments ignored.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.display().to_string())
    }

    pub fn parse(text: &str, source: impl Into<String>) -> Result<Self> {
        let lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        Self::new(lines, source)
    }

    /// The lexicon bundled with the crate.
    pub fn bundled() -> Self {
        Self::parse(include_str!("../../data/hedges.txt"), "bundled")
            .expect("bundled lexicon is non-empty")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, phrase: &str) -> bool {
        self.entries.contains(&tokenize(phrase))
    }

    /// Longest-match, non-overlapping, left-to-right count of lexicon hits.
    pub fn count_matches(&self, text: &str) -> usize {
        let tokens = tokenize(text);
        let mut i = 0;
        let mut hits = 0;
        while i < tokens.len() {
            let matched = self.by_head.get(&tokens[i]).and_then(|lens| {
                lens.iter().copied().find(|&len| {
                    i + len <= tokens.len() && self.entries.contains(&tokens[i..i + len])
                })
            });
            match matched {
                Some(len) => {
                    hits += 1;
                    i += len;
                }
                None => i += 1,
            }
        }
        hits
    }
}

/// Counts hedges and maps the count onto [1, 3]: zero hedges is 3 and
/// `cap` or more hedges is 1.
#[derive(Debug, Clone)]
pub struct HedgeScorer {
    pub lexicon: HedgeLexicon,
    pub cap: u32,
}

impl HedgeScorer {
    pub fn new(lexicon: HedgeLexicon, cap: u32) -> Result<Self> {
        if cap == 0 {
            return Err(Error::Invalid("hedge cap must be at least 1".into()));
        }
        Ok(Self { lexicon, cap })
    }

    pub fn score_text(&self, sentence: &str) -> CertaintyScore {
        let raw = self.lexicon.count_matches(sentence);
        let cap = f64::from(self.cap);
        let saturated = (raw as f64).min(cap);
        let value = MAX_CERTAINTY - (MAX_CERTAINTY - MIN_CERTAINTY) * saturated / cap;
        CertaintyScore {
            value,
            scorer: "hedge".into(),
            raw: raw as f64,
        }
    }
}

impl SentenceScorer for HedgeScorer {
    fn label(&self) -> &str {
        "hedge"
    }

    fn score(&self, span: &SentenceSpan) -> Result<CertaintyScore> {
        Ok(self.score_text(&span.text))
    }
}
