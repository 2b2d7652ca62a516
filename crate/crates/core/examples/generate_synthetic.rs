//! Writes a synthetic corpus and the toy names table.
//!
//!     cargo run --example generate_synthetic -- [out_dir] [n_papers] [seed]

use std::path::PathBuf;

use verbal_certainty::synth::{generate, to_jsonl, toy_names_csv, SynthConfig};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = PathBuf::from(args.first().map(String::as_str).unwrap_or("synthetic"));
    let mut cfg = SynthConfig::default();
    if let Some(n) = args.get(1) {
        cfg.n_papers = n.parse()?;
    }
    if let Some(s) = args.get(2) {
        cfg.seed = s.parse()?;
    }
    std::fs::create_dir_all(&out)?;
    let papers = generate(&cfg)?;
    std::fs::write(out.join("synthetic_corpus.jsonl"), to_jsonl(&papers)?)?;
    std::fs::write(out.join("toy_names.csv"), toy_names_csv())?;
    println!("wrote {} papers and 20 names to {}", papers.len(), out.display());
    Ok(())
}
