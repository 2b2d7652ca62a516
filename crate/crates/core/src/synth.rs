//! Seeded generator of small synthetic corpora with the shape of real
//! exports: English abstracts with cue-phrase conclusions, level-0 and
//! level-5 tags, recurring authors with names and countries, journal ranks,
//! citations and tweet counts.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{AuthorRef, FieldTag, PaperRecord};
use crate::error::{Error, Result};
use crate::pipeline::DEFAULT_DISCIPLINES;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_papers: usize,
    pub n_authors: usize,
    pub years: (i32, i32),
    /// Papers in this year carry tweet counts.
    pub tweet_year: i32,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self { n_papers: 200, n_authors: 120, years: (2006, 2020), tweet_year: 2017, seed: 7 }
    }
}

const SUBFIELDS: [[&str; 3]; 10] = [
    ["Quantum optics", "Condensed matter", "Astrophysics"],
    ["Algebra", "Combinatorics", "Number theory"],
    ["Machine learning", "Computer networks", "Programming languages"],
    ["Power electronics", "Signal processing", "Control theory"],
    ["Nanomaterials", "Metallurgy", "Polymer science"],
    ["Organic chemistry", "Catalysis", "Electrochemistry"],
    ["Genetics", "Ecology", "Cell biology"],
    ["Cognitive psychology", "Social psychology", "Developmental psychology"],
    ["Demography", "Criminology", "Social stratification"],
    ["Macroeconomics", "Labour economics", "Finance"],
];

// certainty offset per discipline: computational fields write more assertively
const BASE_HEDGE_RATE: [f64; 10] = [0.6, 0.4, 0.6, 0.5, 0.6, 0.6, 1.3, 1.1, 1.2, 1.1];

const MALE_NAMES: [&str; 10] = ["marco", "bruno", "paolo", "dario", "mario", "pablo", "hugo", "otto", "leo", "enzo"];
const FEMALE_NAMES: [&str; 10] = ["anna", "maria", "laura", "sofia", "elena", "paula", "clara", "nina", "ella", "lucia"];

const COUNTRIES: [&str; 12] = ["US", "GB", "DE", "FR", "CN", "JP", "IN", "BR", "RU", "PL", "EG", "AU"];

const BACKGROUND: [&str; 5] = [
    "The behaviour of {s} systems has been studied for decades.",
    "Recent work in {s} has focused on the role of structure in observed outcomes.",
    "Understanding {s} remains a central problem for the field.",
    "Several aspects of {s} have not been measured directly.",
    "Measurements in {s} are expensive and noisy.",
];

const METHOD: [&str; 5] = [
    "We collected data from {k} independent sources and analysed them with standard tools.",
    "Here we present a framework for {s} and test it on {k} benchmark cases.",
    "We ran {k} controlled experiments and compared the outcomes with earlier reports.",
    "Using a sample of {k} cases, we measured the main quantities of interest.",
    "We derive a new model of {s} and evaluate it against {k} data sets.",
];

const RESULT: [&str; 4] = [
    "The measured effect grew with the size of the sample.",
    "The new approach reduced the error by {k} percent.",
    "Both groups showed the same response under the second condition.",
    "The main quantity changed sign at the critical point.",
];

const CUES: [&str; 4] = ["In conclusion,", "We conclude that", "Our results show that", "Taken together,"];

const CLAIMS: [&str; 5] = [
    "the new mechanism {h}explains the observed behaviour of {s}",
    "{s} {h}depends on the structure of the underlying network",
    "the effect {h}holds across all the settings we tested",
    "this framework {h}improves the state of the art in {s}",
    "the difference between the two regimes {h}reflects a change in scale",
];

const HEDGES: [&str; 6] = ["may ", "likely ", "possibly ", "potentially ", "perhaps ", "probably "];

struct Author {
    id: String,
    name: String,
    country: &'static str,
    home: usize,
}

fn fill(template: &str, subfield: &str, k: u32) -> String {
    template.replace("{s}", &subfield.to_lowercase()).replace("{k}", &k.to_string())
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().collect::<String>() + c.as_str()).unwrap_or_default()
}

/// Generates `cfg.n_papers` records; the same config always yields the same records.
pub fn generate(cfg: &SynthConfig) -> Result<Vec<PaperRecord>> {
    if cfg.years.0 > cfg.years.1 || cfg.n_authors < 2 {
        return Err(Error::Invalid("synthetic corpus needs a year range and at least two authors".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let authors: Vec<Author> = (0..cfg.n_authors)
        .map(|i| {
            let male = rng.random_bool(0.5);
            let first = if male { MALE_NAMES.choose(&mut rng) } else { FEMALE_NAMES.choose(&mut rng) }
                .expect("non-empty");
            let name = if rng.random_bool(0.1) {
                format!("{}.", first[..1].to_uppercase())
            } else {
                capitalize(first)
            };
            Author {
                id: format!("A{i:04}"),
                name,
                country: COUNTRIES.choose(&mut rng).expect("non-empty"),
                home: i % DEFAULT_DISCIPLINES.len(),
            }
        })
        .collect();

    let span = (cfg.years.1 - cfg.years.0) as f64;
    let mut papers = Vec::with_capacity(cfg.n_papers);
    for i in 0..cfg.n_papers {
        let d = rng.random_range(0..DEFAULT_DISCIPLINES.len());
        let year = rng.random_range(cfg.years.0..=cfg.years.1);
        let mut tags = vec![FieldTag::new(0, DEFAULT_DISCIPLINES[d])];
        let mut second = None;
        if rng.random_bool(0.15) {
            let e = (d + rng.random_range(1..DEFAULT_DISCIPLINES.len())) % DEFAULT_DISCIPLINES.len();
            tags.push(FieldTag::new(0, DEFAULT_DISCIPLINES[e]));
            second = Some(e);
        }
        let subfield = *SUBFIELDS[d].choose(&mut rng).expect("non-empty");
        tags.push(FieldTag::new(5, subfield));
        if let Some(e) = second {
            tags.push(FieldTag::new(5, *SUBFIELDS[e].choose(&mut rng).expect("non-empty")));
        }

        let team_size = if rng.random_bool(0.03) { 11 } else { rng.random_range(1..=5) };
        let home: Vec<&Author> = authors.iter().filter(|a| a.home == d).collect();
        let mut team: Vec<&Author> = Vec::with_capacity(team_size);
        while team.len() < team_size {
            let pick = if rng.random_bool(0.75) && !home.is_empty() {
                *home.choose(&mut rng).expect("non-empty")
            } else {
                authors.choose(&mut rng).expect("non-empty")
            };
            if !team.iter().any(|a| a.id == pick.id) {
                team.push(pick);
            }
        }

        let tweets = (year == cfg.tweet_year).then(|| if rng.random_bool(0.4) { rng.random_range(1..40) } else { 0 });
        // later, larger and tweeted papers hedge a little more
        let rate = BASE_HEDGE_RATE[d]
            + 0.4 * f64::from(year - cfg.years.0) / span.max(1.0)
            + 0.1 * team_size.min(6) as f64
            + if tweets.unwrap_or(0) > 0 { 0.4 } else { 0.0 };
        let n_hedges = (0..3).filter(|_| rng.random_bool((rate / 3.0).clamp(0.0, 1.0))).count();

        let k = rng.random_range(3..60);
        let mut sentences = vec![
            fill(BACKGROUND.choose(&mut rng).expect("non-empty"), subfield, k),
            fill(METHOD.choose(&mut rng).expect("non-empty"), subfield, k),
        ];
        if rng.random_bool(0.6) {
            sentences.push(fill(RESULT.choose(&mut rng).expect("non-empty"), subfield, k));
        }
        let n_conc = if rng.random_bool(0.85) { 1 } else if rng.random_bool(0.5) { 2 } else { 0 };
        for c in 0..n_conc {
            let cue = CUES.choose(&mut rng).expect("non-empty");
            let hedges = if c == 0 { n_hedges } else { rng.random_range(0..=1) };
            let mut claim = fill(CLAIMS.choose(&mut rng).expect("non-empty"), subfield, k);
            let h: String = HEDGES.choose_multiple(&mut rng, hedges).copied().collect();
            claim = claim.replace("{h}", &h);
            sentences.push(format!("{cue} {claim}."));
        }

        let quality = rng.random::<f64>();
        papers.push(PaperRecord {
            paper_id: format!("P{i:05}"),
            title: format!("A study of {}", subfield.to_lowercase()),
            abstract_text: sentences.join(" "),
            year,
            language: Some("en".into()),
            field_tags: tags,
            authors: team
                .iter()
                .map(|a| AuthorRef::new(a.id.clone()).with_name(a.name.clone()).with_country(a.country))
                .collect(),
            journal_rank: Some((1.0 + 99.0 * quality).round()),
            citation_count: (quality * 40.0 * f64::from(cfg.years.1 + 1 - year) / 5.0).round() as u64
                + rng.random_range(0..5),
            tweet_count: tweets,
        });
    }
    Ok(papers)
}

/// One JSON record per line, the corpus ingest format.
pub fn to_jsonl(papers: &[PaperRecord]) -> Result<String> {
    let mut out = String::new();
    for p in papers {
        out.push_str(&serde_json::to_string(p)?);
        out.push('\n');
    }
    Ok(out)
}

/// The separable 20-name training set used by the examples: male names end
/// in "o", female names in "a".
pub fn toy_names_csv() -> String {
    let mut out = String::from("name,sex,count\n");
    for n in MALE_NAMES {
        out.push_str(&format!("{n},M,10\n"));
    }
    for n in FEMALE_NAMES {
        out.push_str(&format!("{n},F,10\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certainty::HedgeLexicon;
    use crate::corpus::{is_english, split_sentences};

    #[test]
    fn deterministic() {
        let cfg = SynthConfig { n_papers: 30, ..SynthConfig::default() };
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = SynthConfig { seed: 8, ..cfg.clone() };
        assert_ne!(generate(&cfg).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn templates_carry_no_accidental_hedges() {
        let lex = HedgeLexicon::bundled();
        for t in BACKGROUND.iter().chain(&METHOD).chain(&RESULT) {
            assert_eq!(lex.count_matches(&fill(t, "optics", 5)), 0, "{t}");
        }
        for c in CUES {
            for claim in CLAIMS {
                let s = format!("{c} {}.", fill(claim, "optics", 5).replace("{h}", ""));
                assert_eq!(lex.count_matches(&s), 0, "{s}");
            }
        }
        for h in HEDGES {
            assert_eq!(lex.count_matches(h), 1, "{h}");
        }
    }

    #[test]
    fn records_pass_ingest_rules() {
        let papers = generate(&SynthConfig::default()).unwrap();
        assert_eq!(papers.len(), 200);
        for p in &papers {
            assert!(is_english(&p.abstract_text), "{}", p.abstract_text);
            assert!(split_sentences(&p.paper_id, &p.abstract_text).len() >= 2);
            assert!(p.tweet_count.is_some() == (p.year == 2017));
        }
    }
}
