use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::RunConfig;
use super::stages::{AnalysisResults, CORRELATION_METRICS};
use crate::analysis::AnalysisRow;

/// Every figure-analog data file the report emits.
pub const FIGURE_IDS: [&str; 18] = [
    "fig2a_jaccard",
    "fig2b_distribution",
    "fig2c_field_certainty",
    "fig2d_annual_computational",
    "fig2e_annual_life",
    "fig2f_annual_social",
    "fig3a_team_size",
    "fig3b_male_probability",
    "fig3c_interdisciplinarity",
    "fig3d_journal_rank",
    "fig3e_centrality",
    "fig3f_echo_chamber",
    "fig3g_citations",
    "fig3h_tweet_groups",
    "fig3i_tweet_partial",
    "fig4a_country_means",
    "fig4b_country_trends",
    "fig4c_region_averages",
];

/// Plot-ready data for one figure panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure {
    pub id: String,
    pub title: String,
    pub data: Value,
}

fn figure(id: &str, title: &str, data: Value) -> Figure {
    Figure { id: id.to_owned(), title: title.to_owned(), data }
}

fn point(r: &AnalysisRow) -> Value {
    json!({ "year": r.year, "value": r.value, "p_value": r.p_value, "masked": r.masked, "n": r.n })
}

/// Year series of one metric, keyed by field.
fn series(results: &AnalysisResults, fields: &[String], metric: &str) -> Value {
    let mut out = BTreeMap::new();
    for f in fields {
        let pts: Vec<Value> =
            results.rows.iter().filter(|r| &r.field == f && r.metric == metric).map(point).collect();
        out.insert(f.clone(), Value::Array(pts));
    }
    json!(out)
}

fn annual(results: &AnalysisResults, fields: &[String]) -> Value {
    let mut out = BTreeMap::new();
    for f in fields {
        let sd: BTreeMap<i32, f64> = results
            .rows
            .iter()
            .filter(|r| &r.field == f && r.metric == "certainty_sd")
            .map(|r| (r.year, r.value))
            .collect();
        let pts: Vec<Value> = results
            .rows
            .iter()
            .filter(|r| &r.field == f && r.metric == "certainty_mean")
            .map(|r| json!({ "year": r.year, "mean": r.value, "sd": sd.get(&r.year), "n": r.n, "low_n": r.masked }))
            .collect();
        out.insert(f.clone(), Value::Array(pts));
    }
    json!(out)
}

pub fn figures(results: &AnalysisResults, cfg: &RunConfig) -> Vec<Figure> {
    let fields = &cfg.fields.disciplines;
    let group = |name: &str| results.groups.get(name).cloned().unwrap_or_default();
    let mut figs = vec![
        figure("fig2a_jaccard", "Pairwise Jaccard overlap between disciplines", json!(results.jaccard)),
        figure(
            "fig2b_distribution",
            "Distribution of paper certainty",
            json!({
                "edges": results.histogram.edges,
                "counts": results.histogram.counts,
                "density": results.histogram.density(),
            }),
        ),
        figure("fig2c_field_certainty", "Mean and standard deviation of certainty per discipline", json!(results.field_stats)),
        figure("fig2d_annual_computational", "Annual mean certainty, computational sciences", annual(results, &group("computational"))),
        figure("fig2e_annual_life", "Annual mean certainty, life sciences", annual(results, &group("life"))),
        figure("fig2f_annual_social", "Annual mean certainty, social sciences", annual(results, &group("social"))),
    ];
    let titles = [
        "team size (controlling for interdisciplinarity)",
        "male probability",
        "interdisciplinarity (controlling for team size)",
        "journal rank",
        "subfield centrality",
        "echo-chamber effect",
        "citation count",
    ];
    for ((id, metric), title) in FIGURE_IDS[6..13].iter().zip(CORRELATION_METRICS).zip(titles) {
        figs.push(figure(
            id,
            &format!("Yearly correlation of certainty with {title}"),
            series(results, fields, &format!("corr_{metric}")),
        ));
    }
    figs.push(figure(
        "fig3h_tweet_groups",
        "Certainty decrease of tweeted papers and log10 of their count",
        json!(results.tweets),
    ));
    figs.push(figure(
        "fig3i_tweet_partial",
        "Correlation of certainty with tweet count controlling for journal rank",
        series(results, fields, "corr_tweets"),
    ));
    let mut means = BTreeMap::new();
    let mut trends = BTreeMap::new();
    for g in &results.geo {
        let m: BTreeMap<&str, Value> = g
            .countries
            .iter()
            .map(|c| (c.country.as_str(), json!({ "mean": c.mean, "n": c.n, "region": c.region })))
            .collect();
        let t: BTreeMap<&str, Value> = g
            .countries
            .iter()
            .map(|c| (c.country.as_str(), json!({ "trend": c.trend, "p_value": c.trend_p, "masked": c.trend_masked, "years": c.trend_years })))
            .collect();
        means.insert(g.field.clone(), m);
        trends.insert(g.field.clone(), t);
    }
    figs.push(figure("fig4a_country_means", "Mean certainty per country", json!(means)));
    figs.push(figure("fig4b_country_trends", "Correlation of country annual certainty with year", json!(trends)));
    figs.push(figure("fig4c_region_averages", "Normalized regional averages per discipline group", json!(results.region_groups)));
    debug_assert_eq!(figs.iter().map(|f| f.id.as_str()).collect::<Vec<_>>(), FIGURE_IDS);
    figs
}
