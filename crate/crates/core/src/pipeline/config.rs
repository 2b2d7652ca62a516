use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::DEFAULT_ALPHA;
use crate::certainty::DEFAULT_HEDGE_CAP;
use crate::certainty::SummaryPolicy;
use crate::error::{Error, Result};
use crate::gender::GenderBasis;
use crate::network::{EchoMode, MIN_MEMBERS};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "VCERT_CONFIG";

pub const DEFAULT_DISCIPLINES: [&str; 10] = [
    "Physics",
    "Mathematics",
    "Computer science",
    "Electrical engineering",
    "Materials science",
    "Chemistry",
    "Biology",
    "Psychology",
    "Sociology",
    "Economics",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    pub paths: Paths,
    #[serde(default)]
    pub scoring: Scoring,
    #[serde(default)]
    pub windows: Windows,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub fields: Fields,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub corpus: PathBuf,
    /// Hedge lexicon; the bundled list when absent.
    pub lexicon: Option<PathBuf>,
    /// `paper_id, sentence_index, raw_score` TSV, used when `scoring.scorer = "external"`.
    pub external_scores: Option<PathBuf>,
    /// `paper_id, sentence_index, role` TSV; cue phrases when absent.
    pub tagger_file: Option<PathBuf>,
    /// `country,region` CSV; the bundled map when absent.
    pub region_map: Option<PathBuf>,
    /// `name,sex,count` CSV for the name model; gender features are skipped when absent.
    pub names: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScorerKind {
    Hedge,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scoring {
    pub scorer: ScorerKind,
    pub hedge_cap: u32,
    pub summary: SummaryPolicy,
    pub external_label: String,
    pub external_raw_min: f64,
    pub external_raw_max: f64,
    /// Tag the last sentence as the conclusion when no cue phrase matches.
    pub cue_fallback: bool,
}

impl Default for Scoring {
    fn default() -> Self {
        Self {
            scorer: ScorerKind::Hedge,
            hedge_cap: DEFAULT_HEDGE_CAP,
            summary: SummaryPolicy::Min,
            external_label: "external".into(),
            external_raw_min: 0.0,
            external_raw_max: 1.0,
            cue_fallback: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Windows {
    pub temporal: (i32, i32),
    pub correlation: (i32, i32),
    pub tweet_year: i32,
    pub geo_trend: (i32, i32),
}

impl Default for Windows {
    fn default() -> Self {
        Self { temporal: (1910, 2021), correlation: (1970, 2020), tweet_year: 2017, geo_trend: (2000, 2020) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub alpha: f64,
    pub geo_alpha: f64,
    pub min_graph_members: usize,
    pub min_country_papers: usize,
    /// Years with fewer papers are flagged in the annual averages.
    pub min_year_papers: usize,
    pub names_test_fraction: Option<f64>,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            geo_alpha: 0.1,
            min_graph_members: MIN_MEMBERS,
            min_country_papers: 50,
            min_year_papers: 1,
            names_test_fraction: Some(0.2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fields {
    /// Level-0 disciplines analysed.
    pub disciplines: Vec<String>,
    pub computational: Vec<String>,
    pub life: Vec<String>,
    pub social: Vec<String>,
    pub gender_basis: GenderBasis,
    pub echo_mode: EchoMode,
}

impl Default for Fields {
    fn default() -> Self {
        let own = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Self {
            disciplines: own(&DEFAULT_DISCIPLINES),
            computational: own(&DEFAULT_DISCIPLINES[..6]),
            life: own(&DEFAULT_DISCIPLINES[6..8]),
            social: own(&DEFAULT_DISCIPLINES[8..]),
            gender_basis: GenderBasis::FirstAuthor,
            echo_mode: EchoMode::NodeRatio,
        }
    }
}

impl Fields {
    /// The three discipline groups with their names.
    pub fn groups(&self) -> [(&'static str, &[String]); 3] {
        [("computational", &self.computational), ("life", &self.life), ("social", &self.social)]
    }
}

impl RunConfig {
    /// Default config reading `corpus` and writing to `output_dir`.
    pub fn new(corpus: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            output_dir: output_dir.into(),
            seed: 0,
            paths: Paths {
                corpus: corpus.into(),
                lexicon: None,
                external_scores: None,
                tagger_file: None,
                region_map: None,
                names: None,
            },
            scoring: Scoring::default(),
            windows: Windows::default(),
            thresholds: Thresholds::default(),
            fields: Fields::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output_dir);
        fix(&mut self.paths.corpus);
        for p in [
            &mut self.paths.lexicon,
            &mut self.paths.external_scores,
            &mut self.paths.tagger_file,
            &mut self.paths.region_map,
            &mut self.paths.names,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        for (name, (a, b)) in [
            ("temporal", self.windows.temporal),
            ("correlation", self.windows.correlation),
            ("geo_trend", self.windows.geo_trend),
        ] {
            if a > b {
                return bad(format!("window {name} is empty: {a} > {b}"));
            }
        }
        for (name, a) in [("alpha", self.thresholds.alpha), ("geo_alpha", self.thresholds.geo_alpha)] {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("{name} {a} not in (0, 1)"));
            }
        }
        if let Some(f) = self.thresholds.names_test_fraction {
            if !(f > 0.0 && f < 1.0) {
                return bad(format!("names_test_fraction {f} not in (0, 1)"));
            }
        }
        if self.scoring.scorer == ScorerKind::External && self.paths.external_scores.is_none() {
            return bad("scorer = \"external\" needs paths.external_scores".into());
        }
        if self.scoring.hedge_cap == 0 {
            return bad("hedge_cap must be at least 1".into());
        }
        if self.fields.disciplines.is_empty() {
            return bad("no disciplines configured".into());
        }
        Ok(())
    }
}
