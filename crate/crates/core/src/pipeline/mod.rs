//! Staged, reproducible runs: ingest, score, features, network, analyze and
//! report. Each stage writes into `<output_dir>/<stage>/` together with the
//! resolved config and a manifest of input and output hashes; downstream
//! stages refuse to run on missing or stale upstream outputs.

mod config;
mod manifest;
mod report;
mod stages;

pub use config::{Fields, Paths, RunConfig, ScorerKind, Scoring, Thresholds, Windows, CONFIG_ENV, DEFAULT_DISCIPLINES};
pub use manifest::{sha256_file, sha256_hex, StageManifest, CONFIG_ECHO_FILE, MANIFEST_FILE};
pub use report::{Figure, FIGURE_IDS};
pub use stages::{
    load_name_model, load_results, AnalysisResults, FieldStat, PaperFeatures, PaperScoreRow, Pipeline, RegionAverage,
    SentenceScoreRow, Stage, CORRELATION_METRICS,
};
