use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::config::{RunConfig, ScorerKind};
use super::manifest::{sha256_file, sha256_hex, StageManifest, StageWriter, MANIFEST_FILE};
use super::report;
use crate::analysis::{
    annual_averages, assign_country, geographic_summary, normalize_region_averages, prepublication_metric,
    tweet_group_comparison, yearly_correlation, AnalysisRow, AnalysisTable, CorrMethod, GeoItem, GeoOptions,
    GeoSummary, Region, RegionMap, Sample, TweetComparison,
};
use crate::certainty::{
    load_external_scores, summarize_paper, CertaintyScore, HedgeLexicon, HedgeScorer, Histogram, SentenceScorer,
};
use crate::corpus::{
    ingest, jaccard_overlap, Corpus, CuePhraseTagger, FileTagger, IngestReport, OverlapMatrix, RecordFormat,
    SentenceTable, TagSummary, DEFAULT_CUE_PHRASES,
};
use crate::error::{Error, Result};
use crate::gender::{self, paper_gender, GenderOutcome, NameModel, TrainConfig};
use crate::network::{build_graph, network_metrics, EchoMode, NetworkMetrics};
use crate::team::{build_background, interdisciplinarity, FieldSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Ingest,
    Score,
    Features,
    Network,
    Analyze,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Ingest,
        Stage::Score,
        Stage::Features,
        Stage::Network,
        Stage::Analyze,
        Stage::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Score => "score",
            Stage::Features => "features",
            Stage::Network => "network",
            Stage::Analyze => "analyze",
            Stage::Report => "report",
        }
    }

    /// Stages whose outputs this stage reads.
    pub fn upstream(self) -> &'static [Stage] {
        match self {
            Stage::Ingest => &[],
            Stage::Score | Stage::Features | Stage::Network => &[Stage::Ingest],
            Stage::Analyze => &[Stage::Ingest, Stage::Score, Stage::Features, Stage::Network],
            Stage::Report => &[Stage::Analyze],
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown stage {s:?}")))
    }
}

pub const CORPUS_FILE: &str = "corpus.json";
pub const SENTENCE_SCORES_FILE: &str = "sentence_scores.tsv";
pub const PAPER_SCORES_FILE: &str = "paper_scores.tsv";
pub const FEATURES_FILE: &str = "features.jsonl";
pub const NETWORK_FILE: &str = "network_metrics.csv";
pub const ANALYSIS_CSV: &str = "analysis.csv";
pub const RESULTS_FILE: &str = "results.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceScoreRow {
    pub paper_id: String,
    pub sentence_index: usize,
    pub value: f64,
    pub raw: f64,
    pub scorer: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperScoreRow {
    pub paper_id: String,
    pub certainty: f64,
    pub n_sentences: usize,
}

/// Per-paper bibliometric features, joined on `paper_id`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperFeatures {
    pub paper_id: String,
    pub year: i32,
    pub team_size: usize,
    pub male_probability: Option<f64>,
    pub gender_excluded: Option<String>,
    pub interdisciplinarity: Option<f64>,
    pub journal_rank: Option<f64>,
    pub citation_count: u64,
    pub tweet_count: Option<u64>,
    pub country: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldStat {
    pub field: String,
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionAverage {
    pub region: Region,
    pub mean: f64,
    /// Min-max scaled within the discipline group.
    pub scaled: f64,
    pub n_papers: usize,
}

/// Everything the analyze stage computes; the report stage reads only this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResults {
    pub rows: Vec<AnalysisRow>,
    pub tweets: Vec<TweetComparison>,
    pub geo: Vec<GeoSummary>,
    pub region_groups: BTreeMap<String, Vec<RegionAverage>>,
    pub field_stats: Vec<FieldStat>,
    pub jaccard: Option<OverlapMatrix>,
    pub histogram: Histogram,
    pub groups: BTreeMap<String, Vec<String>>,
}

/// Correlation metrics in figure order, with the method used for each.
pub const CORRELATION_METRICS: [&str; 7] = [
    "team_size",
    "male_probability",
    "interdisciplinarity",
    "journal_rank",
    "centrality",
    "echo_chamber",
    "citations",
];

/// Runs the pipeline stages for one resolved config.
pub struct Pipeline {
    cfg: RunConfig,
    config_toml: String,
    config_sha256: String,
}

impl Pipeline {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let config_toml = cfg.to_toml()?;
        let config_sha256 = sha256_hex(config_toml.as_bytes());
        Ok(Self { cfg, config_toml, config_sha256 })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn out_dir(&self) -> &Path {
        &self.cfg.output_dir
    }

    pub fn stage_dir(&self, stage: Stage) -> PathBuf {
        self.cfg.output_dir.join(stage.as_str())
    }

    pub fn run(&self, stage: Stage) -> Result<StageManifest> {
        log::info!("running stage {stage}");
        match stage {
            Stage::Ingest => self.ingest(),
            Stage::Score => self.score(),
            Stage::Features => self.features(),
            Stage::Network => self.network(),
            Stage::Analyze => self.analyze(),
            Stage::Report => self.report(),
        }
    }

    pub fn run_all(&self) -> Result<Vec<StageManifest>> {
        Stage::ALL.into_iter().map(|s| self.run(s)).collect()
    }

    fn writer(&self, stage: Stage) -> Result<StageWriter> {
        let mut inputs = Vec::new();
        for up in stage.upstream() {
            self.require(*up, stage)?;
            let path = self.stage_dir(*up).join(MANIFEST_FILE);
            inputs.push((format!("{up}/{MANIFEST_FILE}"), sha256_file(&path)?));
        }
        let mut w = StageWriter::new(&self.cfg.output_dir, stage.as_str(), &self.config_toml)?;
        for (label, hash) in inputs {
            w.input(label, hash);
        }
        Ok(w)
    }

    fn require(&self, stage: Stage, by: Stage) -> Result<StageManifest> {
        let dir = self.stage_dir(stage);
        let m = StageManifest::load(&dir).map_err(|_| Error::Stage {
            stage: stage.to_string(),
            detail: format!("`{by}` needs its outputs in {}; run `vcert {stage}` first", dir.display()),
        })?;
        m.verify(&dir, &self.config_sha256)?;
        Ok(m)
    }

    fn read(&self, stage: Stage, name: &str) -> Result<Vec<u8>> {
        let path = self.stage_dir(stage).join(name);
        std::fs::read(&path).map_err(|e| Error::io(path, e))
    }

    fn load_corpus(&self) -> Result<Corpus> {
        Corpus::from_index_json(&self.read(Stage::Ingest, CORPUS_FILE)?)
    }

    fn ingest(&self) -> Result<StageManifest> {
        let mut w = self.writer(Stage::Ingest)?;
        let path = &self.cfg.paths.corpus;
        w.input("corpus", sha256_file(path)?);
        let (corpus, report): (Corpus, IngestReport) = ingest(path, RecordFormat::from_path(path))?;
        log::info!("ingested {} records, skipped {}", report.accepted, report.skipped);
        w.write(CORPUS_FILE, &corpus.to_index_json()?)?;
        w.write_json("ingest_report.json", &report)?;
        w.finish()
    }

    fn score(&self) -> Result<StageManifest> {
        let mut w = self.writer(Stage::Score)?;
        let corpus = self.load_corpus()?;
        let mut table = SentenceTable::split_all(&corpus);
        let summary: TagSummary = match &self.cfg.paths.tagger_file {
            Some(p) => {
                w.input("tagger_file", sha256_file(p)?);
                crate::corpus::tag_conclusions(&mut table, &FileTagger::load(p)?)?
            }
            None => {
                let tagger = CuePhraseTagger::new(DEFAULT_CUE_PHRASES.iter().copied(), self.cfg.scoring.cue_fallback);
                crate::corpus::tag_conclusions(&mut table, &tagger)?
            }
        };
        let scorer: Box<dyn SentenceScorer> = match self.cfg.scoring.scorer {
            ScorerKind::Hedge => {
                let lexicon = match &self.cfg.paths.lexicon {
                    Some(p) => {
                        w.input("lexicon", sha256_file(p)?);
                        HedgeLexicon::load(p)?
                    }
                    None => HedgeLexicon::bundled(),
                };
                Box::new(HedgeScorer::new(lexicon, self.cfg.scoring.hedge_cap)?)
            }
            ScorerKind::External => {
                let p = self.cfg.paths.external_scores.as_ref().expect("validated");
                w.input("external_scores", sha256_file(p)?);
                let s = &self.cfg.scoring;
                Box::new(load_external_scores(p, &s.external_label, s.external_raw_min, s.external_raw_max)?)
            }
        };
        let scored: Vec<(String, Vec<(usize, CertaintyScore)>)> = table
            .by_paper
            .par_iter()
            .map(|(id, _)| {
                let scores = table
                    .conclusions(id)
                    .map(|span| scorer.score(span).map(|s| (span.index, s)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((id.clone(), scores))
            })
            .collect::<Result<_>>()?;
        let mut sentences = Vec::new();
        let mut papers = Vec::new();
        for (id, scores) in scored {
            if scores.is_empty() {
                continue;
            }
            for (index, s) in &scores {
                sentences.push(SentenceScoreRow {
                    paper_id: id.clone(),
                    sentence_index: *index,
                    value: s.value,
                    raw: s.raw,
                    scorer: s.scorer.clone(),
                });
            }
            let only: Vec<CertaintyScore> = scores.into_iter().map(|(_, s)| s).collect();
            let paper = summarize_paper(&only, self.cfg.scoring.summary)?;
            papers.push(PaperScoreRow { paper_id: id, certainty: paper.value, n_sentences: only.len() });
        }
        log::info!("scored {} papers from {} conclusion sentences", papers.len(), sentences.len());
        w.write(SENTENCE_SCORES_FILE, &to_tsv(&sentences)?)?;
        w.write(PAPER_SCORES_FILE, &to_tsv(&papers)?)?;
        w.write_json("tag_summary.json", &summary)?;
        w.finish()
    }

    fn features(&self) -> Result<StageManifest> {
        let mut w = self.writer(Stage::Features)?;
        let corpus = self.load_corpus()?;
        let model = match &self.cfg.paths.names {
            Some(p) => {
                w.input("names", sha256_file(p)?);
                let rows = gender::load_name_rows(p)?;
                let cfg = TrainConfig {
                    test_fraction: self.cfg.thresholds.names_test_fraction,
                    seed: self.cfg.seed,
                    ..TrainConfig::default()
                };
                let (model, report) = gender::train(&rows, &cfg)?;
                log::info!("name model: {} grams, test F1 {:?}", report.vocabulary_size, report.test_f1);
                w.write("name_model.json", model.to_json()?.as_bytes())?;
                w.write_json("name_train_report.json", &report)?;
                Some(model)
            }
            None => {
                log::warn!("no names data configured; gender features skipped");
                None
            }
        };
        let space = FieldSpace::mag_with(&corpus);
        let basis = self.cfg.fields.gender_basis;
        let features: Vec<PaperFeatures> = corpus
            .records()
            .par_iter()
            .map(|p| {
                let (male_probability, gender_excluded) = match model.as_ref().map(|m| paper_gender(p, m, basis)) {
                    Some(GenderOutcome::Scored(s)) => (Some(s.value), None),
                    Some(GenderOutcome::Excluded(why)) => (None, Some(why)),
                    None => (None, None),
                };
                let team: Vec<_> =
                    p.authors.iter().map(|a| build_background(&a.author_id, &corpus, p.year, &space)).collect();
                PaperFeatures {
                    paper_id: p.paper_id.clone(),
                    year: p.year,
                    team_size: p.team_size(),
                    male_probability,
                    gender_excluded,
                    interdisciplinarity: interdisciplinarity(&team).ok().map(|d| d.value),
                    journal_rank: p.journal_rank,
                    citation_count: p.citation_count,
                    tweet_count: p.tweet_count,
                    country: assign_country(p),
                }
            })
            .collect();
        let mut sorted = features;
        sorted.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
        w.write(FEATURES_FILE, &to_jsonl(&sorted)?)?;
        w.finish()
    }

    fn network(&self) -> Result<StageManifest> {
        let mut w = self.writer(Stage::Network)?;
        let corpus = self.load_corpus()?;
        let subfields: BTreeSet<String> =
            self.cfg.fields.disciplines.iter().flat_map(|d| corpus.subfields_of(d)).collect();
        let (start, end) = self.cfg.windows.correlation;
        let cells: Vec<(String, i32)> =
            subfields.iter().flat_map(|s| (start..=end).map(move |y| (s.clone(), y))).collect();
        let min_members = self.cfg.thresholds.min_graph_members;
        let metrics: Vec<Option<NetworkMetrics>> = cells
            .par_iter()
            .map(|(s, y)| {
                let g = build_graph(&corpus, s, *y, min_members)?;
                if g.members.is_empty() {
                    return Ok(None);
                }
                network_metrics(&g, *y).map(Some)
            })
            .collect::<Result<_>>()?;
        let metrics: Vec<NetworkMetrics> = metrics.into_iter().flatten().collect();
        log::info!("{} subfield graphs over {} subfields", metrics.len(), subfields.len());
        w.write(NETWORK_FILE, &to_csv(&metrics, b',')?)?;
        w.finish()
    }

    fn analyze(&self) -> Result<StageManifest> {
        let mut w = self.writer(Stage::Analyze)?;
        let corpus = self.load_corpus()?;
        let scores: BTreeMap<String, f64> = from_tsv::<PaperScoreRow>(&self.read(Stage::Score, PAPER_SCORES_FILE)?)?
            .into_iter()
            .map(|r| (r.paper_id, r.certainty))
            .collect();
        let features: BTreeMap<String, PaperFeatures> =
            from_jsonl::<PaperFeatures>(&self.read(Stage::Features, FEATURES_FILE)?)?
                .into_iter()
                .map(|f| (f.paper_id.clone(), f))
                .collect();
        let graphs: BTreeMap<(String, i32), NetworkMetrics> =
            from_csv::<NetworkMetrics>(&self.read(Stage::Network, NETWORK_FILE)?, b',')?
                .into_iter()
                .map(|m| ((m.subfield.clone(), m.year), m))
                .collect();
        let regions = match &self.cfg.paths.region_map {
            Some(p) => {
                w.input("region_map", sha256_file(p)?);
                RegionMap::load(p)?
            }
            None => RegionMap::bundled(),
        };
        let ctx = AnalyzeContext { cfg: &self.cfg, corpus: &corpus, scores: &scores, features: &features, graphs: &graphs, regions: &regions };

        let per_field: Vec<FieldOutput> =
            self.cfg.fields.disciplines.par_iter().map(|d| ctx.field(d)).collect::<Result<_>>()?;

        let mut table = AnalysisTable::new();
        let mut tweets = Vec::new();
        let mut geo = Vec::new();
        let mut field_stats = Vec::new();
        for out in per_field {
            table.extend(out.rows)?;
            tweets.extend(out.tweet);
            geo.push(out.geo);
            field_stats.extend(out.stat);
        }
        let mut region_groups = BTreeMap::new();
        let mut groups = BTreeMap::new();
        for (name, members) in self.cfg.fields.groups() {
            let summaries: Vec<&GeoSummary> = geo.iter().filter(|g| members.contains(&g.field)).collect();
            let averages = normalize_region_averages(&summaries)
                .into_iter()
                .map(|(region, mean, scaled, n_papers)| RegionAverage { region, mean, scaled, n_papers })
                .collect::<Vec<_>>();
            region_groups.insert(name.to_owned(), averages);
            groups.insert(name.to_owned(), members.to_vec());
        }
        let jaccard = jaccard_overlap(&self.cfg.fields.disciplines, &corpus).ok();
        let all: Vec<f64> = scores.values().copied().collect();
        let histogram = Histogram::over_certainty_range(&all, crate::certainty::EVALUATION_BINS);

        let mut csv_bytes = Vec::new();
        table.write_csv(&mut csv_bytes)?;
        w.write(ANALYSIS_CSV, &csv_bytes)?;
        w.write("geo_countries.csv", &geo_country_csv(&geo)?)?;
        let results = AnalysisResults {
            rows: table.rows().into_iter().cloned().collect(),
            tweets,
            geo,
            region_groups,
            field_stats,
            jaccard,
            histogram,
            groups,
        };
        w.write_json(RESULTS_FILE, &results)?;
        w.finish()
    }

    fn report(&self) -> Result<StageManifest> {
        let mut w = self.writer(Stage::Report)?;
        let results: AnalysisResults = serde_json::from_slice(&self.read(Stage::Analyze, RESULTS_FILE)?)?;
        let figures = report::figures(&results, &self.cfg);
        let mut index = BTreeMap::new();
        for fig in &figures {
            let name = format!("{}.json", fig.id);
            w.write_json(&name, fig)?;
            index.insert(fig.id.clone(), name);
        }
        w.write_json("figures.json", &index)?;
        w.finish()
    }
}

struct AnalyzeContext<'a> {
    cfg: &'a RunConfig,
    corpus: &'a Corpus,
    scores: &'a BTreeMap<String, f64>,
    features: &'a BTreeMap<String, PaperFeatures>,
    graphs: &'a BTreeMap<(String, i32), NetworkMetrics>,
    regions: &'a RegionMap,
}

struct FieldOutput {
    rows: Vec<AnalysisRow>,
    tweet: Option<TweetComparison>,
    geo: GeoSummary,
    stat: Option<FieldStat>,
}

impl AnalyzeContext<'_> {
    fn field(&self, field: &str) -> Result<FieldOutput> {
        let cfg = self.cfg;
        // scored papers of the discipline, with their features
        let papers: Vec<(&crate::corpus::PaperRecord, f64, &PaperFeatures)> = self
            .corpus
            .records()
            .iter()
            .filter(|p| p.has_tag(0, field))
            .filter_map(|p| Some((p, *self.scores.get(&p.paper_id)?, self.features.get(&p.paper_id)?)))
            .collect();

        let mut rows = Vec::new();
        let (t0, t1) = cfg.windows.temporal;
        let annual: Vec<(i32, f64)> = papers.iter().map(|(p, c, _)| (p.year, *c)).collect();
        rows.extend(annual_averages(&annual, field, t0..=t1, cfg.thresholds.min_year_papers)?);

        let subfields = self.corpus.subfields_of(field);
        let echo_mode = cfg.fields.echo_mode;
        let (c0, c1) = cfg.windows.correlation;
        for metric in CORRELATION_METRICS {
            let (method, control_names): (CorrMethod, Vec<String>) = match metric {
                "team_size" => (CorrMethod::Partial, vec!["interdisciplinarity".into()]),
                "interdisciplinarity" => (CorrMethod::Partial, vec!["team_size".into()]),
                _ => (CorrMethod::Spearman, vec![]),
            };
            let samples: Vec<Sample> = papers
                .iter()
                .filter_map(|(p, c, f)| {
                    let value = match metric {
                        "team_size" => f.team_size as f64,
                        "male_probability" => f.male_probability?,
                        "interdisciplinarity" => f.interdisciplinarity?,
                        "journal_rank" => f.journal_rank?,
                        "centrality" => prepublication_metric(p, &subfields, self.graphs, |m| m.gini)?,
                        "echo_chamber" => prepublication_metric(p, &subfields, self.graphs, |m| {
                            Some(match echo_mode {
                                EchoMode::NodeRatio => m.echo_node,
                                EchoMode::EdgeRatio => m.echo_edge,
                            })
                        })?,
                        "citations" => f.citation_count as f64,
                        _ => unreachable!("metric list is fixed"),
                    };
                    let controls = match metric {
                        "team_size" => vec![f.interdisciplinarity?],
                        "interdisciplinarity" => vec![f.team_size as f64],
                        _ => vec![],
                    };
                    Some(Sample { year: p.year, certainty: *c, metric: value, controls })
                })
                .collect();
            rows.extend(yearly_correlation(&samples, field, metric, c0..=c1, &method, &control_names, cfg.thresholds.alpha)?);
        }

        let ty = cfg.windows.tweet_year;
        let tweet_items: Vec<(f64, u64)> = papers
            .iter()
            .filter(|(p, _, _)| p.year == ty)
            .filter_map(|(_, c, f)| Some((*c, f.tweet_count?)))
            .collect();
        let tweet = tweet_group_comparison(&tweet_items, field, ty)?;
        if let Some(t) = &tweet {
            rows.extend(t.rows(cfg.thresholds.alpha));
        }
        let tweet_samples: Vec<Sample> = papers
            .iter()
            .filter(|(p, _, _)| p.year == ty)
            .filter_map(|(p, c, f)| {
                Some(Sample { year: p.year, certainty: *c, metric: f.tweet_count? as f64, controls: vec![f.journal_rank?] })
            })
            .collect();
        rows.extend(yearly_correlation(
            &tweet_samples,
            field,
            "tweets",
            ty..=ty,
            &CorrMethod::Partial,
            &["journal_rank".to_owned()],
            cfg.thresholds.alpha,
        )?);

        let geo_items: Vec<GeoItem> = papers
            .iter()
            .filter_map(|(p, c, f)| Some(GeoItem { country: f.country.clone()?, year: p.year, certainty: *c }))
            .collect();
        let opts = GeoOptions {
            min_papers: cfg.thresholds.min_country_papers,
            trend_years: cfg.windows.geo_trend,
            trend_alpha: cfg.thresholds.geo_alpha,
        };
        let geo = geographic_summary(&geo_items, field, self.regions, &opts)?;

        let values: Vec<f64> = papers.iter().map(|(_, c, _)| *c).collect();
        let stat = (!values.is_empty()).then(|| {
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let sd = if n > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            FieldStat { field: field.to_owned(), mean, sd, n }
        });
        Ok(FieldOutput { rows, tweet, geo, stat })
    }
}

fn geo_country_csv(geo: &[GeoSummary]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "country", "region", "mean", "n", "trend", "trend_p", "trend_masked", "trend_years"])?;
    for g in geo {
        for c in &g.countries {
            w.write_record([
                g.field.clone(),
                c.country.clone(),
                c.region.as_str().to_owned(),
                c.mean.to_string(),
                c.n.to_string(),
                c.trend.map(|v| v.to_string()).unwrap_or_default(),
                c.trend_p.map(|v| v.to_string()).unwrap_or_default(),
                c.trend_masked.to_string(),
                c.trend_years.to_string(),
            ])?;
        }
    }
    w.into_inner().map_err(|e| Error::Invalid(e.to_string()))
}

fn to_csv<T: Serialize>(rows: &[T], delimiter: u8) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Invalid(e.to_string()))
}

fn from_csv<T: DeserializeOwned>(bytes: &[u8], delimiter: u8) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new().delimiter(delimiter).from_reader(bytes);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

fn to_tsv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    to_csv(rows, b'\t')
}

fn from_tsv<T: DeserializeOwned>(bytes: &[u8]) -> Result<Vec<T>> {
    from_csv(bytes, b'\t')
}

fn to_jsonl<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    Ok(out)
}

fn from_jsonl<T: DeserializeOwned>(bytes: &[u8]) -> Result<Vec<T>> {
    bytes
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).map_err(Error::from))
        .collect()
}

/// Reads the analyze stage's results from an output directory.
pub fn load_results(out_dir: &Path) -> Result<AnalysisResults> {
    let path = out_dir.join(Stage::Analyze.as_str()).join(RESULTS_FILE);
    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
    Ok(serde_json::from_slice(&bytes)?)
}

/// Loads a trained name model written by the features stage.
pub fn load_name_model(out_dir: &Path) -> Result<NameModel> {
    NameModel::load(out_dir.join(Stage::Features.as_str()).join("name_model.json"))
}
