//! Splits an abstract into sentences and marks conclusions by cue phrase.
//!
//!     cargo run --example conclusion_tagging -- "First sentence. In conclusion, it works."

use verbal_certainty::corpus::{split_sentences, ConclusionTagger, CuePhraseTagger, Role, DEFAULT_CUE_PHRASES};

const DEFAULT_ABSTRACT: &str = "Grain boundaries limit the conductivity of ceramic electrolytes. \
We measured 14 samples (Fig. 2) sintered at 1,400 C, i.e. below the usual temperature. \
Conductivity rose by 2.5 times. Taken together, these findings suggest that lower sintering \
temperatures may be preferable.";

const NO_CUE_ABSTRACT: &str = "We report a new route to porous carbon. Yields reached 80%. \
The material is stable in air.";

fn main() -> anyhow::Result<()> {
    let texts: Vec<String> = match std::env::args().nth(1) {
        Some(t) => vec![t],
        None => vec![DEFAULT_ABSTRACT.to_owned(), NO_CUE_ABSTRACT.to_owned()],
    };
    for text in &texts {
        let sentences = split_sentences("example", text);
        for fallback in [false, true] {
            let tagger = CuePhraseTagger::new(DEFAULT_CUE_PHRASES.iter().copied(), fallback);
            let roles = tagger.tag("example", &sentences)?;
            println!("last-sentence fallback: {fallback}");
            for (s, role) in sentences.iter().zip(roles) {
                let mark = if role == Role::Conclusion { "CONC" } else { "    " };
                println!("  {mark} [{}..{}] {}", s.start, s.end, s.text);
            }
        }
    }
    Ok(())
}
