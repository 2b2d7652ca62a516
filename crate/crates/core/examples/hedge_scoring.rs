//! Scores sentences with the bundled hedge lexicon and summarizes them as one
//! paper.
//!
//!     cargo run --example hedge_scoring -- "We show X." "X may possibly hold."

use verbal_certainty::certainty::{summarize_paper, HedgeLexicon, HedgeScorer, SummaryPolicy, DEFAULT_HEDGE_CAP};

fn main() -> anyhow::Result<()> {
    let mut sentences: Vec<String> = std::env::args().skip(1).collect();
    if sentences.is_empty() {
        sentences = vec![
            "We show that the catalyst doubles the reaction rate.".into(),
            "These results suggest that the effect may depend on temperature.".into(),
            "It is possible that the mechanism could perhaps differ in vivo.".into(),
        ];
    }
    let lexicon = HedgeLexicon::bundled();
    println!("lexicon: {} entries", lexicon.len());
    let scorer = HedgeScorer::new(lexicon, DEFAULT_HEDGE_CAP)?;
    let scores: Vec<_> = sentences.iter().map(|s| scorer.score_text(s)).collect();
    for (s, score) in sentences.iter().zip(&scores) {
        println!("{:.3}  hedges={}  {s}", score.value, score.raw);
    }
    for policy in [SummaryPolicy::Min, SummaryPolicy::Mean] {
        println!("paper certainty ({policy:?}): {:.3}", summarize_paper(&scores, policy)?.value);
    }
    Ok(())
}
