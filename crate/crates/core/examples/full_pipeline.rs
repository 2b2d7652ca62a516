//! Runs every stage on the bundled synthetic corpus and lists the figure
//! data it produced.
//!
//!     cargo run --example full_pipeline -- [out_dir]

use verbal_certainty::pipeline::{load_results, Pipeline, RunConfig};

fn main() -> anyhow::Result<()> {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut cfg = RunConfig::load(root.join("data/synthetic.toml"))?;
    if let Some(out) = std::env::args().nth(1) {
        cfg.output_dir = out.into();
    }
    let pipeline = Pipeline::new(cfg)?;
    for m in pipeline.run_all()? {
        println!("{:<9} {} outputs", m.stage, m.outputs.len());
    }
    let results = load_results(pipeline.out_dir())?;
    for f in &results.field_stats {
        println!("  {:<22} mean {:.3}  sd {:.3}  n {}", f.field, f.mean, f.sd, f.n);
    }
    let visible = results.rows.iter().filter(|r| r.metric.starts_with("corr_") && !r.masked).count();
    println!("{} correlation rows, {visible} significant", results.rows.iter().filter(|r| r.metric.starts_with("corr_")).count());
    println!("outputs in {}", pipeline.out_dir().display());
    Ok(())
}
