//! Builds a subfield's ten-year coauthorship graph from the synthetic corpus
//! and prints its centrality and echo-chamber metrics.
//!
//!     cargo run --example coauthor_network -- ["Machine learning"] [2018] [edges.tsv]

use verbal_certainty::corpus::{ingest, RecordFormat};
use verbal_certainty::network::{build_graph, network_metrics, LorenzCurve};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let subfield = args.first().map(String::as_str).unwrap_or("Machine learning");
    let year: i32 = args.get(1).map(|y| y.parse()).transpose()?.unwrap_or(2018);
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_corpus.jsonl");
    let (corpus, _) = ingest(&path, RecordFormat::Jsonl)?;

    let graph = build_graph(&corpus, subfield, year, 5)?;
    let m = network_metrics(&graph, year)?;
    println!("{} in {year}, window {:?}", graph.subfield, graph.window);
    println!("  members {}  neighbors {}  edges {}  sparse {}", m.members, m.neighbors, graph.edges.len(), m.sparse);
    println!("  gini {:?}  echo node {:.4}  echo edge {:.4}", m.gini, m.echo_node, m.echo_edge);
    let curve = LorenzCurve::from_values(&graph.member_degrees())?;
    for (x, y) in curve.points.iter().step_by((curve.points.len() / 5).max(1)) {
        println!("  lorenz {x:.2} -> {y:.3}");
    }
    if let Some(out) = args.get(2) {
        graph.write_edge_list(std::fs::File::create(out)?)?;
        println!("edge list written to {out}");
    }
    Ok(())
}
