//! Bibliographic records: ingestion, validation and indexing.
//!
//! Records arrive as JSON lines (or an equivalent TSV layout). Invalid
//! records are skipped with a per-line warning; an unreadable file is fatal.
//! Once built, a [`Corpus`] is immutable and can be shared across threads.

mod language;
mod overlap;
mod sentences;
mod tagger;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use language::{english_score, is_english, ENGLISH_THRESHOLD};
pub use overlap::{jaccard_index, jaccard_overlap, OverlapMatrix};
pub use sentences::{split_sentences, SentenceSpan, SentenceTable, ABBREVIATIONS};
pub use tagger::{
    tag_conclusions, ConclusionTagger, CuePhraseTagger, FileTagger, Role, TagSummary,
    DEFAULT_CUE_PHRASES,
};

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2021;
pub const MAX_FIELD_LEVEL: u8 = 5;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldTag {
    pub level: u8,
    pub tag: String,
}

impl FieldTag {
    pub fn new(level: u8, tag: impl Into<String>) -> Self {
        Self {
            level,
            tag: tag.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorRef {
    pub author_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

impl AuthorRef {
    pub fn new(author_id: impl Into<String>) -> Self {
        Self {
            author_id: author_id.into(),
            first_name: None,
            country: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.first_name = Some(name.into());
        self
    }

    pub fn with_country(mut self, country: impl Into<String>) -> Self {
        self.country = Some(country.into());
        self
    }

    /// True when the first name is missing or only initials ("C.", "J. P.").
    pub fn name_is_abbreviated(&self) -> bool {
        self.first_name.as_deref().is_none_or(is_abbreviated_name)
    }
}

/// A name made only of single-letter parts, each optionally followed by a
/// period, counts as abbreviated. Blank names count too.
pub fn is_abbreviated_name(name: &str) -> bool {
    let parts: Vec<&str> = name
        .split(|c: char| c.is_whitespace() || c == '-')
        .filter(|p| !p.is_empty())
        .collect();
    if parts.is_empty() {
        return true;
    }
    parts.iter().all(|p| {
        let letters: Vec<char> = p.chars().filter(|c| *c != '.').collect();
        letters.len() <= 1
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    pub field_tags: Vec<FieldTag>,
    pub authors: Vec<AuthorRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub journal_rank: Option<f64>,
    #[serde(default)]
    pub citation_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tweet_count: Option<u64>,
}

impl PaperRecord {
    pub fn tags_at(&self, level: u8) -> impl Iterator<Item = &str> {
        self.field_tags
            .iter()
            .filter(move |t| t.level == level)
            .map(|t| t.tag.as_str())
    }

    pub fn has_tag(&self, level: u8, tag: &str) -> bool {
        self.tags_at(level).any(|t| t.eq_ignore_ascii_case(tag))
    }

    pub fn team_size(&self) -> usize {
        self.authors.len()
    }
}

/// Why a line was skipped during ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineWarning {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub accepted: usize,
    pub skipped: usize,
    pub warnings: Vec<LineWarning>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordFormat {
    Jsonl,
    Tsv,
}

impl RecordFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") => RecordFormat::Tsv,
            _ => RecordFormat::Jsonl,
        }
    }
}

/// Immutable, indexed collection of validated paper records.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    records: Vec<PaperRecord>,
    by_id: HashMap<String, usize>,
    by_author: HashMap<String, Vec<usize>>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records
    }
}

impl Corpus {
    /// Builds a corpus from already-validated records. Later duplicates of a
    /// `paper_id` are rejected.
    pub fn from_records(records: Vec<PaperRecord>) -> Result<Self> {
        let mut corpus = Corpus::default();
        for record in records {
            if corpus.by_id.contains_key(&record.paper_id) {
                return Err(Error::DuplicateKey(record.paper_id));
            }
            corpus.push(record);
        }
        Ok(corpus)
    }

    fn push(&mut self, record: PaperRecord) {
        let idx = self.records.len();
        self.by_id.insert(record.paper_id.clone(), idx);
        for author in &record.authors {
            let papers = self.by_author.entry(author.author_id.clone()).or_default();
            if papers.last() != Some(&idx) {
                papers.push(idx);
            }
        }
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[PaperRecord] {
        &self.records
    }

    pub fn get(&self, paper_id: &str) -> Option<&PaperRecord> {
        self.by_id.get(paper_id).map(|&i| &self.records[i])
    }

    /// Papers listing `author_id`, in corpus order.
    pub fn papers_by_author<'a>(&'a self, author_id: &str) -> impl Iterator<Item = &'a PaperRecord> + 'a {
        self.by_author
            .get(author_id)
            .into_iter()
            .flatten()
            .map(move |&i| &self.records[i])
    }

    /// Distinct tags at `level`, sorted.
    pub fn tags(&self, level: u8) -> BTreeSet<String> {
        self.records
            .iter()
            .flat_map(|r| r.tags_at(level).map(str::to_owned))
            .collect()
    }

    /// Level-5 subfields that co-occur with the level-0 `discipline` on at
    /// least one paper, i.e. subfields for which `discipline` is an ancestor.
    pub fn subfields_of(&self, discipline: &str) -> BTreeSet<String> {
        self.records
            .iter()
            .filter(|r| r.has_tag(0, discipline))
            .flat_map(|r| r.tags_at(MAX_FIELD_LEVEL).map(str::to_owned))
            .collect()
    }

    /// Serialized index: one canonical JSON document for the whole corpus.
    pub fn to_index_json(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(&self.records)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn from_index_json(bytes: &[u8]) -> Result<Self> {
        let records: Vec<PaperRecord> = serde_json::from_slice(bytes)?;
        Self::from_records(records)
    }
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    paper_id: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(rename = "abstract")]
    abstract_text: Option<String>,
    year: Option<i64>,
    #[serde(default)]
    language: Option<String>,
    #[serde(default)]
    field_tags: Vec<FieldTag>,
    #[serde(default)]
    authors: Vec<AuthorRef>,
    #[serde(default)]
    journal_rank: Option<f64>,
    #[serde(default)]
    citation_count: Option<u64>,
    #[serde(default)]
    tweet_count: Option<u64>,
}

fn validate(raw: RawRecord) -> std::result::Result<PaperRecord, String> {
    let paper_id = raw
        .paper_id
        .filter(|s| !s.trim().is_empty())
        .ok_or("missing paper_id")?;
    let abstract_text = raw
        .abstract_text
        .filter(|s| !s.trim().is_empty())
        .ok_or("missing abstract")?;
    let year = raw.year.ok_or("missing year")?;
    if !(i64::from(MIN_YEAR)..=i64::from(MAX_YEAR)).contains(&year) {
        return Err(format!("year {year} outside {MIN_YEAR}-{MAX_YEAR}"));
    }
    match raw.language.as_deref().map(str::to_ascii_lowercase) {
        Some(lang) if lang != "en" && lang != "eng" && lang != "english" => {
            return Err(format!("abstract language {lang:?} is not English"));
        }
        Some(_) => {}
        None => {
            if !is_english(&abstract_text) {
                return Err("abstract does not look English".into());
            }
        }
    }
    if let Some(tag) = raw.field_tags.iter().find(|t| t.level > MAX_FIELD_LEVEL) {
        return Err(format!("field tag {:?} has level {} > {MAX_FIELD_LEVEL}", tag.tag, tag.level));
    }
    let mut authors = raw.authors;
    for a in &mut authors {
        if a.author_id.trim().is_empty() {
            return Err("author with empty author_id".into());
        }
        if let Some(c) = a.country.take() {
            let c = c.trim().to_ascii_uppercase();
            if c.is_empty() {
                continue;
            }
            if c.len() != 2 || !c.chars().all(|ch| ch.is_ascii_alphabetic()) {
                return Err(format!("country {c:?} is not an ISO-3166 alpha-2 code"));
            }
            a.country = Some(c);
        }
        if a.first_name.as_deref().is_some_and(|n| n.trim().is_empty()) {
            a.first_name = None;
        }
    }
    if let Some(rank) = raw.journal_rank {
        if !(rank.is_finite() && rank >= 0.0) {
            return Err(format!("journal_rank {rank} is not a nonnegative number"));
        }
    }
    Ok(PaperRecord {
        paper_id,
        title: raw.title.unwrap_or_default(),
        abstract_text,
        year: year as i32,
        language: raw.language,
        field_tags: raw.field_tags,
        authors,
        journal_rank: raw.journal_rank,
        citation_count: raw.citation_count.unwrap_or(0),
        tweet_count: raw.tweet_count,
    })
}

/// Reads and validates a record file. Malformed or invalid lines are skipped
/// and reported; only an unreadable file is an error.
pub fn ingest(path: impl AsRef<Path>, format: RecordFormat) -> Result<(Corpus, IngestReport)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raws: Vec<(usize, std::result::Result<RawRecord, String>)> = match format {
        RecordFormat::Jsonl => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, serde_json::from_str(l).map_err(|e| e.to_string())))
            .collect(),
        RecordFormat::Tsv => parse_tsv(&text),
    };
    Ok(collect_records(raws))
}

fn collect_records(
    raws: Vec<(usize, std::result::Result<RawRecord, String>)>,
) -> (Corpus, IngestReport) {
    let mut corpus = Corpus::default();
    let mut report = IngestReport::default();
    for (line, raw) in raws {
        let outcome = raw.and_then(validate).and_then(|r| {
            if corpus.by_id.contains_key(&r.paper_id) {
                Err(format!("duplicate paper_id {:?}", r.paper_id))
            } else {
                Ok(r)
            }
        });
        match outcome {
            Ok(record) => {
                corpus.push(record);
                report.accepted += 1;
            }
            Err(reason) => {
                log::warn!("line {line}: skipped: {reason}");
                report.skipped += 1;
                report.warnings.push(LineWarning { line, reason });
            }
        }
    }
    (corpus, report)
}

/// TSV layout: a header row naming the JSON fields, then one record per row.
/// `field_tags` is `level:tag` items joined by `;`; `authors` is
/// `author_id/first_name/country` items joined by `;` (empty parts allowed).
fn parse_tsv(text: &str) -> Vec<(usize, std::result::Result<RawRecord, String>)> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Vec::new();
    };
    let columns: Vec<&str> = header.split('\t').map(str::trim).collect();
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, tsv_row(&columns, l)))
        .collect()
}

fn tsv_row(columns: &[&str], line: &str) -> std::result::Result<RawRecord, String> {
    let cells: Vec<&str> = line.split('\t').collect();
    if cells.len() != columns.len() {
        return Err(format!("expected {} columns, found {}", columns.len(), cells.len()));
    }
    let row: BTreeMap<&str, &str> = columns.iter().copied().zip(cells).collect();
    let text = |k: &str| row.get(k).map(|v| v.trim()).filter(|v| !v.is_empty()).map(str::to_owned);
    let number = |k: &str| -> std::result::Result<Option<f64>, String> {
        text(k)
            .map(|v| v.parse::<f64>().map_err(|_| format!("{k}: {v:?} is not a number")))
            .transpose()
    };
    let count = |k: &str| -> std::result::Result<Option<u64>, String> {
        text(k)
            .map(|v| v.parse::<u64>().map_err(|_| format!("{k}: {v:?} is not a count")))
            .transpose()
    };
    let mut field_tags = Vec::new();
    for item in text("field_tags").unwrap_or_default().split(';').filter(|s| !s.is_empty()) {
        let (level, tag) = item
            .split_once(':')
            .ok_or_else(|| format!("field tag {item:?} is not level:tag"))?;
        let level = level
            .trim()
            .parse::<u8>()
            .map_err(|_| format!("field tag level {level:?} is not an integer"))?;
        field_tags.push(FieldTag::new(level, tag.trim()));
    }
    let mut authors = Vec::new();
    for item in text("authors").unwrap_or_default().split(';').filter(|s| !s.is_empty()) {
        let mut parts = item.split('/').map(str::trim);
        let id = parts.next().unwrap_or_default();
        let opt = |p: Option<&str>| p.filter(|s| !s.is_empty()).map(str::to_owned);
        authors.push(AuthorRef {
            author_id: id.to_owned(),
            first_name: opt(parts.next()),
            country: opt(parts.next()),
        });
    }
    Ok(RawRecord {
        paper_id: text("paper_id"),
        title: text("title"),
        abstract_text: text("abstract"),
        year: number("year")?.map(|y| y as i64),
        language: text("language"),
        field_tags,
        authors,
        journal_rank: number("journal_rank")?,
        citation_count: count("citation_count")?,
        tweet_count: count("tweet_count")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const GOOD: &str = r#"{"paper_id":"p1","title":"T","abstract":"We show that the method works well in practice.","year":2010,"language":"en","field_tags":[{"level":0,"tag":"Physics"}],"authors":[{"author_id":"a1","first_name":"Anna","country":"us"}]}"#;

    fn write(contents: &str, suffix: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn three_valid_one_malformed() {
        let body = [
            GOOD.to_string(),
            GOOD.replace("p1", "p2"),
            "{not json".to_string(),
            GOOD.replace("p1", "p3"),
        ]
        .join("\n");
        let f = write(&body, ".jsonl");
        let (corpus, report) = ingest(f.path(), RecordFormat::Jsonl).unwrap();
        assert_eq!(corpus.len(), 3);
        assert_eq!(report.skipped, 1);
        assert_eq!(report.warnings[0].line, 3);
        assert_eq!(corpus.get("p1").unwrap().authors[0].country.as_deref(), Some("US"));
    }

    #[test]
    fn empty_file_gives_empty_corpus() {
        let f = write("", ".jsonl");
        let (corpus, report) = ingest(f.path(), RecordFormat::Jsonl).unwrap();
        assert!(corpus.is_empty());
        assert_eq!(report.skipped, 0);
    }

    #[test]
    fn missing_abstract_is_skipped() {
        let body = GOOD.replace(r#""abstract":"We show that the method works well in practice.","#, "");
        let f = write(&body, ".jsonl");
        let (corpus, report) = ingest(f.path(), RecordFormat::Jsonl).unwrap();
        assert!(corpus.is_empty());
        assert_eq!(report.skipped, 1);
        assert!(report.warnings[0].reason.contains("abstract"));
    }

    #[test]
    fn non_english_language_field_is_skipped() {
        let f = write(&GOOD.replace(r#""en""#, r#""de""#), ".jsonl");
        let (corpus, _) = ingest(f.path(), RecordFormat::Jsonl).unwrap();
        assert!(corpus.is_empty());
    }

    #[test]
    fn out_of_range_year_and_duplicates_are_skipped() {
        let body = [GOOD.to_string(), GOOD.to_string(), GOOD.replace("2010", "2030").replace("p1", "p9")].join("\n");
        let f = write(&body, ".jsonl");
        let (corpus, report) = ingest(f.path(), RecordFormat::Jsonl).unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(report.skipped, 2);
    }

    #[test]
    fn unreadable_file_is_fatal() {
        assert!(matches!(
            ingest("/nonexistent/records.jsonl", RecordFormat::Jsonl),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn tsv_matches_jsonl() {
        let tsv = "paper_id\ttitle\tabstract\tyear\tlanguage\tfield_tags\tauthors\tjournal_rank\tcitation_count\ttweet_count\n\
                   p1\tT\tWe show that the method works well in practice.\t2010\ten\t0:Physics\ta1/Anna/us\t\t\t\n";
        let f = write(tsv, ".tsv");
        let (from_tsv, _) = ingest(f.path(), RecordFormat::from_path(f.path())).unwrap();
        let g = write(GOOD, ".jsonl");
        let (from_json, _) = ingest(g.path(), RecordFormat::Jsonl).unwrap();
        assert_eq!(from_tsv, from_json);
    }

    #[test]
    fn reingest_is_bytewise_identical() {
        let body = [GOOD.to_string(), GOOD.replace("p1", "p2")].join("\n");
        let f = write(&body, ".jsonl");
        let a = ingest(f.path(), RecordFormat::Jsonl).unwrap().0.to_index_json().unwrap();
        let b = ingest(f.path(), RecordFormat::Jsonl).unwrap().0.to_index_json().unwrap();
        assert_eq!(a, b);
        let back = Corpus::from_index_json(&a).unwrap();
        assert_eq!(back.to_index_json().unwrap(), a);
    }

    #[test]
    fn abbreviated_names() {
        for n in ["C.", "C", "J. P.", "J.-P.", "  "] {
            assert!(is_abbreviated_name(n), "{n}");
        }
        for n in ["Anna", "Jo", "Mary Ann"] {
            assert!(!is_abbreviated_name(n), "{n}");
        }
        assert!(AuthorRef::new("x").name_is_abbreviated());
    }
}
