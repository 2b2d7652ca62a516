//! The three studies: temporal averages, per-year metric correlations and
//! geographic aggregation. Everything lands in a long-form [`AnalysisTable`].

mod geo;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::corpus::{PaperRecord, MAX_FIELD_LEVEL};
use crate::error::{Error, Result};
use crate::network::NetworkMetrics;
use crate::stats::{self, CorrResult};

pub use geo::{
    assign_country, geographic_summary, normalize_region_averages, CountryRow, GeoItem, GeoOptions, GeoSummary, Region,
    RegionMap, RegionRow,
};

pub const CSV_HEADER: &str = "field,year,metric,value,p_value,masked,n";

/// Significance level for the per-year correlation series.
pub const DEFAULT_ALPHA: f64 = 0.05;
/// Fewer joined records than this and a yearly correlation row is dropped.
pub const MIN_CORRELATION_N: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRow {
    pub field: String,
    pub year: i32,
    pub metric: String,
    pub value: f64,
    pub p_value: Option<f64>,
    pub masked: bool,
    pub n: usize,
}

/// Long-form result table, unique on (field, year, metric).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisTable {
    rows: Vec<AnalysisRow>,
    #[serde(skip)]
    keys: BTreeSet<(String, i32, String)>,
}

impl AnalysisTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: AnalysisRow) -> Result<()> {
        let key = (row.field.clone(), row.year, row.metric.clone());
        if !self.keys.insert(key) {
            return Err(Error::DuplicateKey(format!("{}/{}/{}", row.field, row.year, row.metric)));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = AnalysisRow>) -> Result<()> {
        rows.into_iter().try_for_each(|r| self.push(r))
    }

    pub fn merge(&mut self, other: AnalysisTable) -> Result<()> {
        self.extend(other.rows)
    }

    /// Rows sorted by (field, metric, year).
    pub fn rows(&self) -> Vec<&AnalysisRow> {
        let mut rows: Vec<&AnalysisRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| (&a.field, &a.metric, a.year).cmp(&(&b.field, &b.metric, b.year)));
        rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, field: &str, year: i32, metric: &str) -> Option<&AnalysisRow> {
        self.rows.iter().find(|r| r.field == field && r.year == year && r.metric == metric)
    }

    /// One metric's rows for one field, ordered by year.
    pub fn series(&self, field: &str, metric: &str) -> Vec<&AnalysisRow> {
        self.rows().into_iter().filter(|r| r.field == field && r.metric == metric).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(CSV_HEADER.split(','))?;
        for r in self.rows() {
            w.write_record([
                r.field.clone(),
                r.year.to_string(),
                r.metric.clone(),
                r.value.to_string(),
                r.p_value.map(|p| p.to_string()).unwrap_or_default(),
                r.masked.to_string(),
                r.n.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Per-year mean (`certainty_mean`) and sample standard deviation
/// (`certainty_sd`, only when n >= 2) of paper-level certainty. Years under
/// `min_n` papers keep their rows but are marked `masked`.
pub fn annual_averages(
    items: &[(i32, f64)],
    field: &str,
    years: RangeInclusive<i32>,
    min_n: usize,
) -> Result<Vec<AnalysisRow>> {
    if years.is_empty() {
        return Err(Error::Invalid(format!("empty year range {}..={}", years.start(), years.end())));
    }
    let mut by_year: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for &(y, c) in items.iter().filter(|(y, _)| years.contains(y)) {
        by_year.entry(y).or_default().push(c);
    }
    let mut rows = Vec::new();
    for (year, values) in by_year {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let low = n < min_n;
        rows.push(row(field, year, "certainty_mean", mean, None, low, n));
        if n >= 2 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            rows.push(row(field, year, "certainty_sd", var.sqrt(), None, low, n));
        }
    }
    Ok(rows)
}

fn row(field: &str, year: i32, metric: &str, value: f64, p: Option<f64>, masked: bool, n: usize) -> AnalysisRow {
    AnalysisRow {
        field: field.to_owned(),
        year,
        metric: metric.to_owned(),
        value,
        p_value: p,
        masked,
        n,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrMethod {
    Spearman,
    /// Pearson partial correlation controlling for the named covariates.
    Partial,
}

/// One joined record: a paper's certainty, the metric under study and any
/// control covariates, in a fixed order shared by all samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub year: i32,
    pub certainty: f64,
    pub metric: f64,
    pub controls: Vec<f64>,
}

/// Per-year correlation between `metric` and certainty. Rows are named
/// `corr_<metric>` and masked when p > alpha. Years with fewer than 3 records,
/// or whose statistic is undefined, are skipped with a warning.
pub fn yearly_correlation(
    samples: &[Sample],
    field: &str,
    metric: &str,
    years: RangeInclusive<i32>,
    method: &CorrMethod,
    control_names: &[String],
    alpha: f64,
) -> Result<Vec<AnalysisRow>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Invalid(format!("alpha {alpha} not in (0, 1)")));
    }
    if *method == CorrMethod::Partial && control_names.is_empty() {
        return Err(Error::Invalid(format!("partial correlation of {metric} needs controls")));
    }
    if samples.iter().any(|s| s.controls.len() != control_names.len()) {
        return Err(Error::Invalid(format!("samples of {metric} disagree with {} control names", control_names.len())));
    }
    let mut by_year: BTreeMap<i32, Vec<&Sample>> = BTreeMap::new();
    for s in samples.iter().filter(|s| years.contains(&s.year)) {
        by_year.entry(s.year).or_default().push(s);
    }
    let name = format!("corr_{metric}");
    let mut rows = Vec::new();
    for (year, group) in by_year {
        if group.len() < MIN_CORRELATION_N {
            log::warn!("{field} {year} {metric}: n = {} below {MIN_CORRELATION_N}, row dropped", group.len());
            continue;
        }
        let x: Vec<f64> = group.iter().map(|s| s.metric).collect();
        let y: Vec<f64> = group.iter().map(|s| s.certainty).collect();
        let result = match method {
            CorrMethod::Spearman => stats::spearman(&x, &y),
            CorrMethod::Partial => {
                let cols: Vec<Vec<f64>> = (0..control_names.len())
                    .map(|j| group.iter().map(|s| s.controls[j]).collect())
                    .collect();
                let controls: Vec<(&str, &[f64])> =
                    control_names.iter().zip(&cols).map(|(n, c)| (n.as_str(), c.as_slice())).collect();
                stats::partial_pearson(&x, &y, &controls)
            }
        };
        match result {
            Ok(CorrResult { coefficient, p_value, n, .. }) => {
                rows.push(row(field, year, &name, coefficient, Some(p_value), stats::is_masked(p_value, alpha), n));
            }
            Err(e @ (Error::Undefined(_) | Error::RankDeficient(_) | Error::Invalid(_))) => {
                log::warn!("{field} {year} {metric}: {e}; row dropped");
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

/// Pre-publication metric of a paper in `discipline`: the mean of the given
/// network metric over the paper's subfields that belong to the discipline
/// and have a non-sparse graph for the paper's year.
pub fn prepublication_metric(
    paper: &PaperRecord,
    discipline_subfields: &BTreeSet<String>,
    graphs: &BTreeMap<(String, i32), NetworkMetrics>,
    pick: impl Fn(&NetworkMetrics) -> Option<f64>,
) -> Option<f64> {
    let values: Vec<f64> = paper
        .tags_at(MAX_FIELD_LEVEL)
        .filter(|t| discipline_subfields.contains(*t))
        .filter_map(|t| graphs.get(&(t.to_owned(), paper.year)))
        .filter(|m| !m.sparse)
        .filter_map(&pick)
        .collect();
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetComparison {
    pub field: String,
    pub year: i32,
    /// Drop in mean certainty of tweeted papers relative to the non-tweeted mean, in percent.
    pub pct_certainty_decrease: f64,
    pub n_tweeted: usize,
    pub n_untweeted: usize,
    pub log10_n_tweeted: f64,
    pub u: f64,
    pub p_value: f64,
    pub exact: bool,
}

impl TweetComparison {
    pub fn rows(&self, alpha: f64) -> Vec<AnalysisRow> {
        let n = self.n_tweeted + self.n_untweeted;
        let masked = stats::is_masked(self.p_value, alpha);
        vec![
            row(&self.field, self.year, "tweet_pct_decrease", self.pct_certainty_decrease, Some(self.p_value), masked, n),
            row(&self.field, self.year, "tweet_mwu_u", self.u, Some(self.p_value), masked, n),
            row(&self.field, self.year, "tweet_log10_n_tweeted", self.log10_n_tweeted, None, false, self.n_tweeted),
        ]
    }
}

/// Compares papers with at least one tweet against papers with none.
/// `items` are (certainty, tweet count) pairs of one field and year. Returns
/// `None` (with a warning) when either group is empty.
pub fn tweet_group_comparison(items: &[(f64, u64)], field: &str, year: i32) -> Result<Option<TweetComparison>> {
    let tweeted: Vec<f64> = items.iter().filter(|(_, t)| *t > 0).map(|(c, _)| *c).collect();
    let untweeted: Vec<f64> = items.iter().filter(|(_, t)| *t == 0).map(|(c, _)| *c).collect();
    if tweeted.is_empty() || untweeted.is_empty() {
        log::warn!(
            "{field} {year}: tweet comparison skipped ({} tweeted, {} untweeted)",
            tweeted.len(),
            untweeted.len()
        );
        return Ok(None);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mt, mu) = (mean(&tweeted), mean(&untweeted));
    let mw = stats::mann_whitney_u(&tweeted, &untweeted)?;
    Ok(Some(TweetComparison {
        field: field.to_owned(),
        year,
        pct_certainty_decrease: (mu - mt) / mu * 100.0,
        n_tweeted: tweeted.len(),
        n_untweeted: untweeted.len(),
        log10_n_tweeted: (tweeted.len() as f64).log10(),
        u: mw.u,
        p_value: mw.p_value,
        exact: mw.exact,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn annual_mean_and_sd() {
        let rows = annual_averages(&[(2000, 1.0), (2000, 2.0), (2000, 3.0)], "Physics", 1990..=2010, 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].value, 2.0);
        assert_eq!(rows[1].value, 1.0);
        assert_eq!(rows[1].n, 3);
    }

    #[test]
    fn empty_years_absent_and_flat_series() {
        let items: Vec<(i32, f64)> = [2000, 2000, 2002, 2002].iter().map(|&y| (y, 2.5)).collect();
        let rows = annual_averages(&items, "f", 2000..=2002, 1).unwrap();
        assert!(rows.iter().all(|r| r.year != 2001));
        assert!(rows.iter().filter(|r| r.metric == "certainty_sd").all(|r| r.value == 0.0));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 2002..=2000;
        assert!(annual_averages(&items, "f", empty, 1).is_err());
    }

    #[test]
    fn low_n_years_flagged() {
        let rows = annual_averages(&[(2000, 1.0), (2001, 1.0), (2001, 2.0)], "f", 2000..=2001, 2).unwrap();
        assert!(rows[0].masked);
        assert!(!rows[1].masked);
    }

    fn samples(rng: &mut ChaCha8Rng, year: i32, n: usize, identical: bool) -> Vec<Sample> {
        (0..n)
            .map(|_| {
                let c = 1.0 + 2.0 * rng.random::<f64>();
                let m = if identical { c } else { rng.random::<f64>() };
                Sample { year, certainty: c, metric: m, controls: vec![] }
            })
            .collect()
    }

    #[test]
    fn identical_metric_gives_one_each_year() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s: Vec<Sample> = (2000..2005).flat_map(|y| samples(&mut rng, y, 20, true)).collect();
        let rows = yearly_correlation(&s, "f", "m", 2000..=2004, &CorrMethod::Spearman, &[], 0.05).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.value == 1.0 && !r.masked && r.n == 20));
    }

    #[test]
    fn small_years_dropped() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = samples(&mut rng, 2000, 2, true);
        s.extend(samples(&mut rng, 2001, 3, true));
        let rows = yearly_correlation(&s, "f", "m", 2000..=2001, &CorrMethod::Spearman, &[], 0.05).unwrap();
        assert_eq!(rows.iter().map(|r| r.year).collect::<Vec<_>>(), vec![2001]);
    }

    #[test]
    fn partial_needs_named_controls() {
        let s = vec![Sample { year: 1, certainty: 1.0, metric: 1.0, controls: vec![1.0] }];
        assert!(yearly_correlation(&s, "f", "m", 1..=1, &CorrMethod::Partial, &[], 0.05).is_err());
        assert!(yearly_correlation(&s, "f", "m", 1..=1, &CorrMethod::Spearman, &[], 0.05).is_err());
    }

    #[test]
    fn tweet_percentage_definition() {
        let items = [(1.8, 3), (1.8, 1), (2.0, 0), (2.0, 0)];
        let t = tweet_group_comparison(&items, "f", 2017).unwrap().unwrap();
        assert!((t.pct_certainty_decrease - 10.0).abs() < 1e-12);
        assert_eq!((t.n_tweeted, t.n_untweeted), (2, 2));
        assert!(t.exact);
    }

    #[test]
    fn identical_tweet_groups() {
        let items = [(2.0, 1), (2.5, 1), (2.0, 0), (2.5, 0)];
        let t = tweet_group_comparison(&items, "f", 2017).unwrap().unwrap();
        assert_eq!(t.pct_certainty_decrease, 0.0);
        assert!((t.p_value - 1.0).abs() < 1e-12);
        assert!(tweet_group_comparison(&[(2.0, 0)], "f", 2017).unwrap().is_none());
    }

    #[test]
    fn table_rejects_duplicates_and_sorts() {
        let mut t = AnalysisTable::new();
        t.push(row("b", 2001, "m", 1.0, None, false, 3)).unwrap();
        t.push(row("a", 2002, "m", 1.0, Some(0.5), true, 3)).unwrap();
        t.push(row("a", 2001, "m", 1.0, None, false, 3)).unwrap();
        assert!(t.push(row("a", 2001, "m", 2.0, None, false, 3)).is_err());
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "a,2001,m,1,,false,3");
        assert_eq!(lines[2], "a,2002,m,1,0.5,true,3");
        assert_eq!(lines[3], "b,2001,m,1,,false,3");
    }
}
