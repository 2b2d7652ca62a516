//! Interdisciplinarity of teams: hand-built backgrounds, then real teams
//! from the bundled synthetic corpus.
//!
//!     cargo run --example team_dispersion

use verbal_certainty::corpus::{ingest, RecordFormat};
use verbal_certainty::team::{build_background, interdisciplinarity, FieldSpace, ResearchBackground};

fn main() -> anyhow::Result<()> {
    let bg = |pmf: &[f64]| ResearchBackground { pmf: pmf.to_vec(), n_past_papers: 1 };
    let cases = [
        ("solo author", vec![bg(&[1.0, 0.0])]),
        ("same background", vec![bg(&[0.5, 0.5]), bg(&[0.5, 0.5])]),
        ("orthogonal pair", vec![bg(&[1.0, 0.0]), bg(&[0.0, 1.0])]),
        ("one bridge", vec![bg(&[1.0, 0.0]), bg(&[0.0, 1.0]), bg(&[0.5, 0.5])]),
    ];
    for (label, team) in &cases {
        println!("{label:<16} {:.4}", interdisciplinarity(team)?.value);
    }

    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_corpus.jsonl");
    let (corpus, _) = ingest(&path, RecordFormat::Jsonl)?;
    let space = FieldSpace::mag_with(&corpus);
    println!("\nlatest synthetic papers:");
    let mut shown = 0;
    for paper in corpus.records().iter().rev() {
        let team: Vec<_> = paper.authors.iter().map(|a| build_background(&a.author_id, &corpus, paper.year, &space)).collect();
        if let Ok(d) = interdisciplinarity(&team) {
            println!("  {} ({}) team {} with {} backgrounds: {:.4}", paper.paper_id, paper.year, team.len(), d.n_a, d.value);
            shown += 1;
        }
        if shown == 8 {
            break;
        }
    }
    Ok(())
}
