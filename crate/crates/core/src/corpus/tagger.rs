use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SentenceSpan, SentenceTable};
use crate::error::{Error, Result};
use crate::text::{contains_phrase, tokenize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Conclusion,
    Other,
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "conclusion" => Ok(Role::Conclusion),
            "other" => Ok(Role::Other),
            other => Err(format!("unknown role {other:?}")),
        }
    }
}

/// Assigns a role to every sentence of one abstract.
pub trait ConclusionTagger: Sync {
    fn tag(&self, paper_id: &str, sentences: &[SentenceSpan]) -> Result<Vec<Role>>;
}

pub const DEFAULT_CUE_PHRASES: &[&str] = &[
    "in conclusion",
    "we conclude",
    "our results show",
    "these findings suggest",
    "taken together",
];

/// Marks sentences containing any cue phrase as conclusions. With the
/// fallback enabled, an abstract without cues gets its last sentence marked.
#[derive(Debug, Clone)]
pub struct CuePhraseTagger {
    cues: Vec<Vec<String>>,
    pub last_sentence_fallback: bool,
}

impl Default for CuePhraseTagger {
    fn default() -> Self {
        Self::new(DEFAULT_CUE_PHRASES.iter().copied(), false)
    }
}

impl CuePhraseTagger {
    pub fn new<I, S>(cues: I, last_sentence_fallback: bool) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cues = cues
            .into_iter()
            .map(|c| tokenize(c.as_ref()))
            .filter(|c| !c.is_empty())
            .collect();
        Self {
            cues,
            last_sentence_fallback,
        }
    }
}

impl ConclusionTagger for CuePhraseTagger {
    fn tag(&self, _paper_id: &str, sentences: &[SentenceSpan]) -> Result<Vec<Role>> {
        let mut roles: Vec<Role> = sentences
            .iter()
            .map(|s| {
                let tokens = tokenize(&s.text);
                if self.cues.iter().any(|c| contains_phrase(&tokens, c)) {
                    Role::Conclusion
                } else {
                    Role::Other
                }
            })
            .collect();
        if self.last_sentence_fallback && !roles.contains(&Role::Conclusion) {
            if let Some(last) = roles.last_mut() {
                *last = Role::Conclusion;
            }
        }
        Ok(roles)
    }
}

/// Roles produced by an external classifier, read from a TSV of
/// `paper_id, sentence_index, role`.
#[derive(Debug, Clone, Default)]
pub struct FileTagger {
    roles: HashMap<(String, usize), Role>,
}

impl FileTagger {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut roles = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if line_no == 1 && cols.first() == Some(&"paper_id") {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                path: path.to_owned(),
                line: line_no,
                message,
            };
            let [paper_id, index, role] = cols[..] else {
                return Err(parse_err(format!("expected 3 columns, found {}", cols.len())));
            };
            let index: usize = index
                .parse()
                .map_err(|_| parse_err(format!("sentence_index {index:?} is not an integer")))?;
            let role: Role = role.parse().map_err(parse_err)?;
            if roles.insert((paper_id.to_owned(), index), role).is_some() {
                return Err(Error::DuplicateKey(format!("{paper_id}/{index}")));
            }
        }
        Ok(Self { roles })
    }
}

impl ConclusionTagger for FileTagger {
    fn tag(&self, paper_id: &str, sentences: &[SentenceSpan]) -> Result<Vec<Role>> {
        sentences
            .iter()
            .map(|s| {
                self.roles
                    .get(&(paper_id.to_owned(), s.index))
                    .copied()
                    .ok_or_else(|| Error::MissingTag {
                        paper_id: paper_id.to_owned(),
                        index: s.index,
                    })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TagSummary {
    pub tagged_papers: usize,
    pub conclusion_sentences: usize,
    /// Papers with no conclusion sentence; they take no part in certainty analysis.
    pub excluded: BTreeSet<String>,
}

/// Runs `tagger` over every abstract, overwriting any earlier roles.
pub fn tag_conclusions(table: &mut SentenceTable, tagger: &dyn ConclusionTagger) -> Result<TagSummary> {
    let mut summary = TagSummary::default();
    for (paper_id, spans) in table.by_paper.iter_mut() {
        let roles = tagger.tag(paper_id, spans)?;
        if roles.len() != spans.len() {
            return Err(Error::Invalid(format!(
                "tagger returned {} roles for {} sentences of {paper_id}",
                roles.len(),
                spans.len()
            )));
        }
        let mut n_conc = 0;
        for (span, role) in spans.iter_mut().zip(roles) {
            span.role = Some(role);
            n_conc += usize::from(role == Role::Conclusion);
        }
        summary.tagged_papers += 1;
        summary.conclusion_sentences += n_conc;
        if n_conc == 0 {
            summary.excluded.insert(paper_id.clone());
        }
    }
    Ok(summary)
}
