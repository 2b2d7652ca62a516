use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Corpus, Role};

/// Lowercased tokens (with their trailing period) after which a period never
/// ends a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "al.", "vs.", "cf.", "fig.", "figs.", "eq.", "eqs.", "ref.", "refs.",
    "approx.", "ca.", "dr.", "mr.", "mrs.", "ms.", "prof.", "no.", "nos.", "vol.", "resp.", "sp.",
    "spp.", "st.", "jr.", "sr.", "inc.", "ltd.", "dept.", "univ.", "viz.", "ibid.", "tab.", "sec.",
    "ch.", "pp.", "var.", "vs", "e.g", "i.e",
];

const CLOSERS: &[char] = &['"', '\'', '\u{201d}', '\u{2019}', ')', ']'];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceSpan {
    pub paper_id: String,
    pub index: usize,
    pub text: String,
    /// Byte offsets of `text` in the source abstract.
    pub start: usize,
    pub end: usize,
    pub role: Option<Role>,
}

fn is_abbreviation(word: &str) -> bool {
    let word = word.trim_start_matches(['(', '[', '"', '\'', '\u{201c}']);
    let lower = word.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}

/// Rule-based splitter. A boundary is a run of `.`, `?` or `!` (plus any
/// closing quotes or brackets) followed by whitespace or end of text, unless
/// the period closes a known abbreviation or the next word starts lowercase.
pub fn split_sentences(paper_id: &str, text: &str) -> Vec<SentenceSpan> {
    let mut bounds: Vec<(usize, usize)> = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (_, c) = chars[i];
        if !matches!(c, '.' | '?' | '!') {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && matches!(chars[j].1, '.' | '?' | '!') {
            j += 1;
        }
        while j < chars.len() && CLOSERS.contains(&chars[j].1) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        let at_end = j >= chars.len();
        if !at_end && !chars[j].1.is_whitespace() {
            i = j;
            continue;
        }
        let word_start = text[..chars[i].0]
            .rfind(char::is_whitespace)
            .map_or(0, |p| p + 1);
        let word = &text[word_start..chars[i].0 + 1];
        let next = chars[j..].iter().map(|&(_, c)| c).find(|c| !c.is_whitespace());
        let continues = next.is_some_and(|n| n.is_lowercase());
        let abbreviated = c == '.' && j == i + 1 && is_abbreviation(word);
        if at_end || !(abbreviated || continues) {
            bounds.push((start, end));
            start = end;
        }
        i = j;
    }
    if start < text.len() {
        bounds.push((start, text.len()));
    }

    bounds
        .into_iter()
        .filter_map(|(s, e)| {
            let raw = &text[s..e];
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                return None;
            }
            let lead = raw.len() - raw.trim_start().len();
            Some((s + lead, s + lead + trimmed.len(), trimmed))
        })
        .enumerate()
        .map(|(index, (s, e, t))| SentenceSpan {
            paper_id: paper_id.to_owned(),
            index,
            text: t.to_owned(),
            start: s,
            end: e,
            role: None,
        })
        .collect()
}

/// Sentences of every abstract in a corpus, keyed by paper id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SentenceTable {
    pub by_paper: BTreeMap<String, Vec<SentenceSpan>>,
}

impl SentenceTable {
    pub fn split_all(corpus: &Corpus) -> Self {
        let by_paper = corpus
            .records()
            .par_iter()
            .map(|r| (r.paper_id.clone(), split_sentences(&r.paper_id, &r.abstract_text)))
            .collect();
        Self { by_paper }
    }

    /// Conclusion sentences of one paper (its CONC set).
    pub fn conclusions(&self, paper_id: &str) -> impl Iterator<Item = &SentenceSpan> {
        self.by_paper
            .get(paper_id)
            .into_iter()
            .flatten()
            .filter(|s| s.role == Some(Role::Conclusion))
    }

    pub fn len(&self) -> usize {
        self.by_paper.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
