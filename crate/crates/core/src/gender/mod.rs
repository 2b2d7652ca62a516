//! Name-based gender inference.
//!
//! First names become character 1..9-gram tf-idf vectors (L2-normalized),
//! each feature multiplied by its smoothed class log-odds. A class-balanced,
//! L2-penalized logistic regression maps the features to the probability
//! that the name belongs to a man. Training is full-batch and deterministic.

mod features;
mod optimize;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{is_abbreviated_name, PaperRecord};
use crate::error::{Error, Result};
use crate::stats::mid_ranks;

pub use features::{char_ngrams, normalize_name};
pub use optimize::{minimize, LbfgsOptions, LbfgsOutcome};

pub const MODEL_FORMAT: &str = "verbal-certainty/name-model";
pub const MODEL_VERSION: u32 = 1;
/// Papers with this many authors or more are left out of gender analysis.
pub const MAX_GENDER_AUTHORS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sex {
    #[serde(rename = "M")]
    Male,
    #[serde(rename = "F")]
    Female,
}

impl std::str::FromStr for Sex {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "M" | "m" => Ok(Sex::Male),
            "F" | "f" => Ok(Sex::Female),
            other => Err(format!("sex {other:?} is not M or F")),
        }
    }
}

/// One training row in SSA layout: a name, a sex and how many babies got it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameRow {
    pub name: String,
    pub sex: Sex,
    pub count: u64,
}

impl NameRow {
    pub fn new(name: impl Into<String>, sex: Sex, count: u64) -> Self {
        Self { name: name.into(), sex, count }
    }
}

/// Reads `name,sex,count` CSV rows; a header row is optional.
pub fn load_name_rows(path: impl AsRef<Path>) -> Result<Vec<NameRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if i == 0 && cols.first().is_some_and(|c| c.eq_ignore_ascii_case("name")) {
            continue;
        }
        let err = |message: String| Error::Parse { path: path.to_owned(), line: i + 1, message };
        let [name, sex, count] = cols[..] else {
            return Err(err(format!("expected name,sex,count; found {} columns", cols.len())));
        };
        let sex = sex.parse().map_err(err)?;
        let count = count
            .parse::<u64>()
            .map_err(|_| err(format!("count {count:?} is not a positive integer")))?;
        rows.push(NameRow::new(name, sex, count));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrainConfig {
    pub ngram_min: usize,
    pub ngram_max: usize,
    /// Inverse regularization strength.
    pub c: f64,
    /// Grams seen in fewer training names are dropped from the vocabulary.
    pub min_df: usize,
    pub class_balanced: bool,
    pub log_odds_scaling: bool,
    /// Additive smoothing of the per-class gram counts in the log-odds.
    pub smoothing: f64,
    pub max_iter: usize,
    pub tol: f64,
    /// Held-out share for evaluation, e.g. 0.2 for an 80/20 split.
    pub test_fraction: Option<f64>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            ngram_min: 1,
            ngram_max: 9,
            c: 2.0,
            min_df: 2,
            class_balanced: true,
            log_odds_scaling: true,
            smoothing: 1.0,
            max_iter: 1000,
            tol: 1e-8,
            test_fraction: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrainReport {
    pub n_train_names: usize,
    pub n_test_names: usize,
    pub vocabulary_size: usize,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub test_f1: Option<f64>,
    pub test_roc_auc: Option<f64>,
}

/// A trained name classifier. Serializes to JSON and reloads bit-exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NameModel {
    pub format: String,
    pub version: u32,
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub c: f64,
    /// Grams in column order.
    pub vocabulary: Vec<String>,
    pub idf: Vec<f64>,
    pub log_odds_scale: Vec<f64>,
    pub weights: Vec<f64>,
    pub bias: f64,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl PartialEq for NameModel {
    fn eq(&self, other: &Self) -> bool {
        self.ngram_min == other.ngram_min
            && self.ngram_max == other.ngram_max
            && self.c.to_bits() == other.c.to_bits()
            && self.vocabulary == other.vocabulary
            && bits(&self.idf) == bits(&other.idf)
            && bits(&self.log_odds_scale) == bits(&other.log_odds_scale)
            && bits(&self.weights) == bits(&other.weights)
            && self.bias.to_bits() == other.bias.to_bits()
    }
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

pub type SparseVec = Vec<(usize, f64)>;

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl NameModel {
    fn rebuild_index(&mut self) {
        self.index = self
            .vocabulary
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
    }

    pub fn dimension(&self) -> usize {
        self.vocabulary.len()
    }

    /// Scaled tf-idf vector of in-vocabulary grams, sorted by column.
    pub fn featurize(&self, name: &str) -> SparseVec {
        featurize_with(&char_ngrams(name, self.ngram_min, self.ngram_max), &self.index, &self.idf, &self.log_odds_scale)
    }

    /// Probability that `name` is a man's name. Abbreviated or missing
    /// names are refused.
    pub fn predict(&self, name: &str) -> Result<f64> {
        if is_abbreviated_name(name) {
            return Err(Error::NameRefused {
                name: name.to_owned(),
                reason: "first name is missing or abbreviated",
            });
        }
        let z = self.bias + self.featurize(name).iter().map(|&(j, v)| self.weights[j] * v).sum::<f64>();
        // keep strictly inside (0, 1) even when the margin saturates
        Ok(sigmoid(z).clamp(f64::EPSILON, 1.0 - f64::EPSILON))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut model: NameModel = serde_json::from_str(text)?;
        if model.format != MODEL_FORMAT || model.version != MODEL_VERSION {
            return Err(Error::Invalid(format!(
                "unsupported model format {} v{}",
                model.format, model.version
            )));
        }
        let d = model.vocabulary.len();
        if model.idf.len() != d || model.log_odds_scale.len() != d || model.weights.len() != d {
            return Err(Error::Invalid("model vectors disagree in dimension".into()));
        }
        model.rebuild_index();
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn featurize_with(
    grams: &BTreeMap<String, u32>,
    index: &HashMap<String, usize>,
    idf: &[f64],
    scale: &[f64],
) -> SparseVec {
    let mut v: SparseVec = grams
        .iter()
        .filter_map(|(g, &tf)| index.get(g).map(|&j| (j, f64::from(tf) * idf[j])))
        .collect();
    let norm = v.iter().map(|(_, x)| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (j, x) in &mut v {
            *x = *x / norm * scale[*j];
        }
    }
    v.retain(|&(_, x)| x != 0.0);
    v.sort_unstable_by_key(|&(j, _)| j);
    v
}

/// Distinct (name, sex) documents with their summed counts, sorted.
fn aggregate(rows: &[NameRow]) -> Result<Vec<(String, Sex, u64)>> {
    let mut docs: BTreeMap<(String, Sex), u64> = BTreeMap::new();
    for r in rows {
        if r.count == 0 {
            return Err(Error::Invalid(format!("name {:?} has count 0", r.name)));
        }
        if is_abbreviated_name(&r.name) {
            continue;
        }
        let key = (r.name.trim().to_lowercase(), r.sex);
        *docs.entry(key).or_insert(0) += r.count;
    }
    Ok(docs.into_iter().map(|((n, s), c)| (n, s, c)).collect())
}

fn fit(docs: &[(String, Sex, u64)], cfg: &TrainConfig) -> Result<(NameModel, LbfgsOutcome)> {
    let n_male = docs.iter().filter(|d| d.1 == Sex::Male).count();
    if n_male == 0 || n_male == docs.len() {
        return Err(Error::Invalid("training data must contain both sexes".into()));
    }
    if cfg.ngram_min == 0 || cfg.ngram_min > cfg.ngram_max {
        return Err(Error::Invalid("invalid n-gram range".into()));
    }
    if !(cfg.c > 0.0) {
        return Err(Error::Invalid("C must be positive".into()));
    }
    let grams: Vec<BTreeMap<String, u32>> = docs
        .iter()
        .map(|(n, _, _)| char_ngrams(n, cfg.ngram_min, cfg.ngram_max))
        .collect();

    // document frequency overall and per class
    let mut df: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (g, (_, sex, _)) in grams.iter().zip(docs) {
        for gram in g.keys() {
            let e = df.entry(gram.as_str()).or_insert((0, 0));
            match sex {
                Sex::Male => e.0 += 1,
                Sex::Female => e.1 += 1,
            }
        }
    }
    let n_docs = docs.len() as f64;
    let mut vocabulary = Vec::new();
    let mut idf = Vec::new();
    let mut scale = Vec::new();
    for (gram, (m, f)) in df {
        if m + f < cfg.min_df {
            continue;
        }
        vocabulary.push(gram.to_owned());
        idf.push(((1.0 + n_docs) / (1.0 + (m + f) as f64)).ln() + 1.0);
        scale.push(if cfg.log_odds_scaling {
            ((m as f64 + cfg.smoothing) / (f as f64 + cfg.smoothing)).ln()
        } else {
            1.0
        });
    }
    let index: HashMap<String, usize> = vocabulary.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let xs: Vec<SparseVec> = grams.iter().map(|g| featurize_with(g, &index, &idf, &scale)).collect();

    // sample weights: popularity counts, rescaled so they sum to the number
    // of training names (each class to half of it when balanced)
    let weight_of = |sex: Sex| -> f64 { docs.iter().filter(|d| d.1 == sex).map(|d| d.2 as f64).sum() };
    let (w_male, w_female) = (weight_of(Sex::Male), weight_of(Sex::Female));
    let weights: Vec<f64> = docs
        .iter()
        .map(|(_, sex, count)| {
            let c = *count as f64;
            if cfg.class_balanced {
                let w_class = if *sex == Sex::Male { w_male } else { w_female };
                c * n_docs / (2.0 * w_class)
            } else {
                c * n_docs / (w_male + w_female)
            }
        })
        .collect();
    let labels: Vec<f64> = docs.iter().map(|d| if d.1 == Sex::Male { 1.0 } else { -1.0 }).collect();

    let dim = vocabulary.len();
    let c = cfg.c;
    let objective = |theta: &[f64], grad: &mut [f64]| -> f64 {
        let (beta, bias) = theta.split_at(dim);
        let mut value = 0.5 * beta.iter().map(|b| b * b).sum::<f64>();
        grad[..dim].copy_from_slice(beta);
        grad[dim] = 0.0;
        for ((x, &y), &w) in xs.iter().zip(&labels).zip(&weights) {
            let z = bias[0] + x.iter().map(|&(j, v)| beta[j] * v).sum::<f64>();
            let margin = y * z;
            value += c * w * softplus(-margin);
            let coef = -c * w * y * sigmoid(-margin);
            for &(j, v) in x {
                grad[j] += coef * v;
            }
            grad[dim] += coef;
        }
        value
    };
    let outcome = minimize(
        objective,
        vec![0.0; dim + 1],
        LbfgsOptions { memory: 10, max_iter: cfg.max_iter, tol: cfg.tol },
    );
    if !outcome.converged {
        log::warn!("name model did not reach tolerance after {} iterations", outcome.iterations);
    }
    let mut model = NameModel {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        ngram_min: cfg.ngram_min,
        ngram_max: cfg.ngram_max,
        c,
        vocabulary,
        idf,
        log_odds_scale: scale,
        weights: outcome.x[..dim].to_vec(),
        bias: outcome.x[dim],
        index: HashMap::new(),
    };
    model.rebuild_index();
    Ok((model, outcome))
}

/// Trains a name model. With `test_fraction` set, a seeded random share of
/// the distinct names is held out and the report carries F1 (threshold 0.5,
/// male as positive) and ROC-AUC on it; the returned model then sees only
/// the training share.
pub fn train(rows: &[NameRow], cfg: &TrainConfig) -> Result<(NameModel, TrainReport)> {
    let docs = aggregate(rows)?;
    let (train_docs, test_docs) = match cfg.test_fraction {
        None => (docs, Vec::new()),
        Some(frac) if frac > 0.0 && frac < 1.0 => {
            let mut shuffled = docs;
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
            let n_test = ((shuffled.len() as f64) * frac).round() as usize;
            let test = shuffled.split_off(shuffled.len() - n_test);
            shuffled.sort();
            (shuffled, test)
        }
        Some(frac) => return Err(Error::Invalid(format!("test fraction {frac} not in (0, 1)"))),
    };
    let (model, outcome) = fit(&train_docs, cfg)?;
    let (test_f1, test_roc_auc) = if test_docs.is_empty() {
        (None, None)
    } else {
        let probs: Vec<f64> = test_docs
            .iter()
            .map(|(n, _, _)| model.predict(n))
            .collect::<Result<_>>()?;
        let truth: Vec<bool> = test_docs.iter().map(|d| d.1 == Sex::Male).collect();
        (Some(f1_score(&probs, &truth)), roc_auc(&probs, &truth))
    };
    let report = TrainReport {
        n_train_names: train_docs.len(),
        n_test_names: test_docs.len(),
        vocabulary_size: model.dimension(),
        iterations: outcome.iterations,
        converged: outcome.converged,
        objective: outcome.value,
        test_f1,
        test_roc_auc,
    };
    Ok((model, report))
}

/// F1 of the positive class at threshold 0.5.
pub fn f1_score(probs: &[f64], truth: &[bool]) -> f64 {
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (&p, &t) in probs.iter().zip(truth) {
        match (p >= 0.5, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    if tp == 0 {
        return 0.0;
    }
    2.0 * tp as f64 / (2 * tp + fp + fneg) as f64
}

/// Area under the ROC curve via the rank-sum identity; `None` when one class
/// is absent.
pub fn roc_auc(probs: &[f64], truth: &[bool]) -> Option<f64> {
    let n_pos = truth.iter().filter(|&&t| t).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let ranks = mid_ranks(probs);
    let pos_rank_sum: f64 = ranks.iter().zip(truth).filter(|(_, &t)| t).map(|(r, _)| r).sum();
    let u = pos_rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos * n_neg) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenderBasis {
    FirstAuthor,
    LastAuthor,
    AllAuthorsMean,
}

impl GenderBasis {
    pub const ALL: [GenderBasis; 3] = [GenderBasis::FirstAuthor, GenderBasis::LastAuthor, GenderBasis::AllAuthorsMean];

    pub fn as_str(self) -> &'static str {
        match self {
            GenderBasis::FirstAuthor => "first_author",
            GenderBasis::LastAuthor => "last_author",
            GenderBasis::AllAuthorsMean => "all_authors_mean",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenderScore {
    /// Probability that the basis author(s) are male.
    pub value: f64,
    pub basis: GenderBasis,
    pub n_scored: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GenderOutcome {
    Scored(GenderScore),
    Excluded(String),
}

impl GenderOutcome {
    pub fn score(&self) -> Option<f64> {
        match self {
            GenderOutcome::Scored(s) => Some(s.value),
            GenderOutcome::Excluded(_) => None,
        }
    }
}

/// Gender score of a paper on one basis. Papers with ten or more authors, or
/// whose basis author has no usable first name, are excluded.
pub fn paper_gender(paper: &PaperRecord, model: &NameModel, basis: GenderBasis) -> GenderOutcome {
    let n = paper.authors.len();
    if n == 0 {
        return GenderOutcome::Excluded("paper has no authors".into());
    }
    if n >= MAX_GENDER_AUTHORS {
        return GenderOutcome::Excluded(format!("{n} authors (limit is fewer than {MAX_GENDER_AUTHORS})"));
    }
    let score_of = |i: usize| paper.authors[i].first_name.as_deref().and_then(|name| model.predict(name).ok());
    let scored = |value: f64, n_scored: usize| GenderOutcome::Scored(GenderScore { value, basis, n_scored });
    match basis {
        GenderBasis::FirstAuthor | GenderBasis::LastAuthor => {
            let i = if basis == GenderBasis::FirstAuthor { 0 } else { n - 1 };
            match score_of(i) {
                Some(p) => scored(p, 1),
                None => GenderOutcome::Excluded(format!("{} has no usable first name", basis.as_str())),
            }
        }
        GenderBasis::AllAuthorsMean => {
            let probs: Vec<f64> = (0..n).filter_map(score_of).collect();
            if probs.is_empty() {
                GenderOutcome::Excluded("no author has a usable first name".into())
            } else {
                scored(probs.iter().sum::<f64>() / probs.len() as f64, probs.len())
            }
        }
    }
}
