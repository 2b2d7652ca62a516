//! Country and region certainty for the synthetic corpus: papers get the
//! shared country of their first and last authors and a hedge-based
//! certainty from their conclusions.
//!
//!     cargo run --example geographic -- [min_papers]

use verbal_certainty::analysis::{assign_country, geographic_summary, normalize_region_averages, GeoItem, GeoOptions, RegionMap};
use verbal_certainty::certainty::{summarize_paper, HedgeLexicon, HedgeScorer, SummaryPolicy, DEFAULT_HEDGE_CAP};
use verbal_certainty::corpus::{ingest, tag_conclusions, CuePhraseTagger, RecordFormat, SentenceTable};

fn main() -> anyhow::Result<()> {
    let min_papers: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(5);
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_corpus.jsonl");
    let (corpus, _) = ingest(&path, RecordFormat::Jsonl)?;
    let mut table = SentenceTable::split_all(&corpus);
    tag_conclusions(&mut table, &CuePhraseTagger::default())?;
    let scorer = HedgeScorer::new(HedgeLexicon::bundled(), DEFAULT_HEDGE_CAP)?;

    let mut items = Vec::new();
    for paper in corpus.records() {
        let scores: Vec<_> = table.conclusions(&paper.paper_id).map(|s| scorer.score_text(&s.text)).collect();
        if let (Some(country), Ok(score)) = (assign_country(paper), summarize_paper(&scores, SummaryPolicy::Min)) {
            items.push(GeoItem { country, year: paper.year, certainty: score.value });
        }
    }
    let opts = GeoOptions { min_papers, ..GeoOptions::default() };
    let summary = geographic_summary(&items, "all fields", &RegionMap::bundled(), &opts)?;
    println!("{} papers with a country; omitted below {min_papers}: {:?}", items.len(), summary.omitted);
    for c in &summary.countries {
        println!("  {} {:<24} mean {:.3}  n {:>3}  trend {:?}", c.country, c.region.as_str(), c.mean, c.n, c.trend.map(|t| (t * 1000.0).round() / 1000.0));
    }
    for (region, mean, scaled, n) in normalize_region_averages(&[&summary]) {
        println!("  {:<24} mean {mean:.3}  scaled {scaled:.3}  n {n}", region.as_str());
    }
    Ok(())
}
