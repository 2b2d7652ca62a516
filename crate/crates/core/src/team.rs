//! Author-team features: research backgrounds and interdisciplinarity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// The 19 top-level fields of the Microsoft Academic Graph taxonomy.
pub const MAG_LEVEL0_FIELDS: [&str; 19] = [
    "Art",
    "Biology",
    "Business",
    "Chemistry",
    "Computer science",
    "Economics",
    "Engineering",
    "Environmental science",
    "Geography",
    "Geology",
    "History",
    "Materials science",
    "Mathematics",
    "Medicine",
    "Philosophy",
    "Physics",
    "Political science",
    "Psychology",
    "Sociology",
];

/// Ordered set of level-0 fields spanning the background PMFs.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl FieldSpace {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut space = Self { names: Vec::new(), index: HashMap::new() };
        for n in names {
            space.insert(n.as_ref());
        }
        space
    }

    pub fn mag() -> Self {
        Self::new(MAG_LEVEL0_FIELDS)
    }

    /// MAG fields plus any other level-0 tag found in `corpus`.
    pub fn mag_with(corpus: &Corpus) -> Self {
        let mut space = Self::mag();
        for tag in corpus.tags(0) {
            space.insert(&tag);
        }
        space
    }

    fn insert(&mut self, name: &str) {
        let key = name.to_lowercase();
        if !self.index.contains_key(&key) {
            self.index.insert(key, self.names.len());
            self.names.push(name.to_owned());
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn position(&self, tag: &str) -> Option<usize> {
        self.index.get(&tag.to_lowercase()).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// An author's distribution over level-0 fields, from prior papers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResearchBackground {
    /// Empty when the author has no prior tagged papers.
    pub pmf: Vec<f64>,
    pub n_past_papers: usize,
}

impl ResearchBackground {
    pub fn is_defined(&self) -> bool {
        !self.pmf.is_empty()
    }
}

/// Background of `author_id` from papers published strictly before
/// `cutoff_year`. A paper with k level-0 tags adds 1/k to each.
pub fn build_background(author_id: &str, corpus: &Corpus, cutoff_year: i32, space: &FieldSpace) -> ResearchBackground {
    let mut mass = vec![0.0; space.len()];
    let mut n_past = 0;
    for paper in corpus.papers_by_author(author_id).filter(|p| p.year < cutoff_year) {
        let fields: Vec<usize> = {
            let mut f: Vec<usize> = paper.tags_at(0).filter_map(|t| space.position(t)).collect();
            f.sort_unstable();
            f.dedup();
            f
        };
        if fields.is_empty() {
            continue;
        }
        n_past += 1;
        let share = 1.0 / fields.len() as f64;
        for f in fields {
            mass[f] += share;
        }
    }
    if n_past == 0 {
        return ResearchBackground { pmf: Vec::new(), n_past_papers: 0 };
    }
    let total: f64 = mass.iter().sum();
    ResearchBackground {
        pmf: mass.into_iter().map(|m| m / total).collect(),
        n_past_papers: n_past,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeamDispersion {
    pub value: f64,
    /// Members with a defined background.
    pub n_a: usize,
}

fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (na > 0.0 && nb > 0.0).then(|| (dot / (na * nb)).clamp(-1.0, 1.0))
}

/// exp(−(1/n_a)·Σᵢ cos(vᵢ, v̄)) over members with a defined background,
/// where v̄ is their centroid; exactly 0 for a one-member team.
pub fn interdisciplinarity(team: &[ResearchBackground]) -> Result<TeamDispersion> {
    let members: Vec<&[f64]> = team.iter().filter(|b| b.is_defined()).map(|b| b.pmf.as_slice()).collect();
    let n_a = members.len();
    if n_a == 0 {
        return Err(Error::Undefined("no team member has a research background".into()));
    }
    if n_a == 1 {
        return Ok(TeamDispersion { value: 0.0, n_a });
    }
    let dim = members[0].len();
    if members.iter().any(|m| m.len() != dim) {
        return Err(Error::Invalid("background PMFs differ in dimension".into()));
    }
    let mut centroid = vec![0.0; dim];
    for m in &members {
        for (c, v) in centroid.iter_mut().zip(*m) {
            *c += v;
        }
    }
    centroid.iter_mut().for_each(|c| *c /= n_a as f64);
    let mut total = 0.0;
    for m in &members {
        total += cosine(m, &centroid).ok_or_else(|| Error::Undefined("zero-length PMF or centroid".into()))?;
    }
    Ok(TeamDispersion { value: (-total / n_a as f64).exp(), n_a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AuthorRef, FieldTag, PaperRecord};

    fn paper(id: &str, year: i32, fields: &[&str], author: &str) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            title: String::new(),
            abstract_text: "x".into(),
            year,
            language: None,
            field_tags: fields.iter().map(|f| FieldTag::new(0, *f)).collect(),
            authors: vec![AuthorRef::new(author)],
            journal_rank: None,
            citation_count: 0,
            tweet_count: None,
        }
    }

    fn bg(pmf: &[f64]) -> ResearchBackground {
        ResearchBackground { pmf: pmf.to_vec(), n_past_papers: 1 }
    }

    #[test]
    fn background_examples() {
        let space = FieldSpace::mag();
        let phys = space.position("Physics").unwrap();
        let bio = space.position("Biology").unwrap();
        let chem = space.position("Chemistry").unwrap();

        let c = Corpus::from_records(vec![
            paper("1", 2000, &["Physics"], "a"),
            paper("2", 2001, &["Physics"], "a"),
            paper("3", 2002, &["Physics"], "a"),
            paper("4", 2010, &["Biology"], "a"),
        ])
        .unwrap();
        let b = build_background("a", &c, 2010, &space);
        assert_eq!(b.n_past_papers, 3);
        assert_eq!(b.pmf[phys], 1.0);

        let b = build_background("a", &c, 2011, &space);
        assert_eq!((b.pmf[phys], b.pmf[bio]), (0.75, 0.25));

        let c = Corpus::from_records(vec![paper("1", 2000, &["Physics", "Chemistry"], "a")]).unwrap();
        let b = build_background("a", &c, 2001, &space);
        assert_eq!((b.pmf[phys], b.pmf[chem]), (0.5, 0.5));

        assert!(!build_background("a", &c, 2000, &space).is_defined());
        assert!(!build_background("nobody", &c, 2100, &space).is_defined());
    }

    #[test]
    fn one_physics_one_biology_is_even() {
        let space = FieldSpace::mag();
        let c = Corpus::from_records(vec![paper("1", 2000, &["Physics"], "a"), paper("2", 2001, &["Biology"], "a")]).unwrap();
        let b = build_background("a", &c, 2005, &space);
        assert_eq!(b.pmf[space.position("physics").unwrap()], 0.5);
        assert_eq!(b.pmf[space.position("biology").unwrap()], 0.5);
    }

    #[test]
    fn dispersion_examples() {
        let solo = interdisciplinarity(&[bg(&[0.2, 0.8])]).unwrap();
        assert_eq!(solo.value, 0.0);
        let same = interdisciplinarity(&[bg(&[0.2, 0.8]), bg(&[0.2, 0.8]), bg(&[0.2, 0.8])]).unwrap();
        assert!((same.value - (-1.0f64).exp()).abs() < 1e-12);
        let ortho = interdisciplinarity(&[bg(&[1.0, 0.0, 0.0]), bg(&[0.0, 1.0, 0.0])]).unwrap();
        assert!((ortho.value - (-1.0 / 2f64.sqrt()).exp()).abs() < 1e-12);
    }

    #[test]
    fn undefined_members_dropped() {
        let undefined = ResearchBackground { pmf: vec![], n_past_papers: 0 };
        let d = interdisciplinarity(&[bg(&[1.0, 0.0]), undefined.clone()]).unwrap();
        assert_eq!((d.value, d.n_a), (0.0, 1));
        assert!(interdisciplinarity(&[undefined]).is_err());
        assert!(interdisciplinarity(&[]).is_err());
    }

    #[test]
    fn extra_fields_extend_the_space() {
        let c = Corpus::from_records(vec![paper("1", 2000, &["Electrical engineering"], "a")]).unwrap();
        let space = FieldSpace::mag_with(&c);
        assert_eq!(space.len(), 20);
    }
}
