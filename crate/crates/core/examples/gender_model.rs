//! Trains the character n-gram name model, reports held-out quality and
//! predicts the names given on the command line.
//!
//!     cargo run --example gender_model -- [names.csv] [name ...]

use std::path::PathBuf;

use verbal_certainty::gender::{load_name_rows, train, NameModel, TrainConfig};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1).peekable();
    let path = match args.peek() {
        Some(a) if a.ends_with(".csv") => PathBuf::from(args.next().expect("peeked")),
        _ => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/toy_names.csv"),
    };
    let mut names: Vec<String> = args.collect();
    if names.is_empty() {
        names = ["Roberto", "Giulia", "Bruno", "Lina", "K."].map(String::from).to_vec();
    }
    let rows = load_name_rows(&path)?;
    let cfg = TrainConfig { test_fraction: Some(0.2), ..TrainConfig::default() };
    let (_, report) = train(&rows, &cfg)?;
    println!("{} rows from {}", rows.len(), path.display());
    println!("held-out: F1 {:?}, ROC-AUC {:?} on {} names", report.test_f1, report.test_roc_auc, report.n_test_names);

    let (model, report) = train(&rows, &TrainConfig::default())?;
    println!("full model: {} grams, {} iterations, converged {}", report.vocabulary_size, report.iterations, report.converged);
    let reloaded = NameModel::from_json(&model.to_json()?)?;
    assert_eq!(model, reloaded);
    for name in names {
        match reloaded.predict(&name) {
            Ok(p) => println!("  {name:<12} P(male) = {p:.3}"),
            Err(e) => println!("  {name:<12} {e}"),
        }
    }
    Ok(())
}
