mod common;

use common::*;
use verbal_certainty::corpus::{AuthorRef, Corpus, FieldTag, PaperRecord};
use verbal_certainty::network::{build_graph, echo_chamber, gini_centrality, network_metrics, EchoMode};
use verbal_certainty::Error;

const SUB: &str = "Spectral graph theory";

fn paper(id: String, year: i32, sub: &str, authors: &[String]) -> PaperRecord {
    PaperRecord {
        paper_id: id,
        title: String::new(),
        abstract_text: "We study graphs.".into(),
        year,
        language: None,
        field_tags: vec![FieldTag::new(0, "Mathematics"), FieldTag::new(5, sub)],
        authors: authors.iter().map(|a| AuthorRef::new(a.clone())).collect(),
        journal_rank: None,
        citation_count: 0,
        tweet_count: None,
    }
}

/// Six community members joined as a cycle or a star, optionally each with
/// two coauthors from another subfield.
fn fixture(star: bool, open: bool) -> Corpus {
    let m = |i: usize| format!("m{i}");
    let pairs: Vec<(usize, usize)> = if star { (1..6).map(|i| (0, i)).collect() } else { (0..6).map(|i| (i, (i + 1) % 6)).collect() };
    let mut papers: Vec<PaperRecord> = pairs
        .iter()
        .enumerate()
        .map(|(k, (a, b))| paper(format!("p{k}"), 2005, SUB, &[m(*a), m(*b)]))
        .collect();
    if open {
        for i in 0..6 {
            for j in 0..2 {
                papers.push(paper(format!("q{i}{j}"), 2006, "Topology", &[m(i), format!("x{i}{j}")]));
            }
        }
    }
    Corpus::from_records(papers).unwrap()
}

#[test]
fn four_quadrants() {
    let mut gini = Vec::new();
    let mut echo = Vec::new();
    for (star, open) in [(false, false), (false, true), (true, false), (true, true)] {
        let g = build_graph(&fixture(star, open), SUB, 2010, 1).unwrap();
        assert_eq!(g.members.len(), 6);
        assert_eq!(g.neighbors.len(), if open { 12 } else { 0 });
        let gi = gini_centrality(&g).unwrap();
        assert!((gi - pairwise_gini(&oracle_degrees(&g.members, &g.edges.iter().map(|((a, b), w)| (a.clone(), b.clone(), *w)).collect::<Vec<_>>()))).abs() < 1e-12);
        let e = echo_chamber(&g, EchoMode::NodeRatio).unwrap();
        gini.push(gi);
        echo.push(e);
        let m = network_metrics(&g, 2010).unwrap();
        assert_eq!(m.gini, Some(gi));
        assert_eq!(m.echo_node, e);
    }
    // cycles are perfectly equal, stars are not
    assert_eq!(gini[0], 0.0);
    assert_eq!(gini[1], 0.0);
    assert!((gini[2] - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(gini[2], gini[3]);
    // outside coauthors dilute the community
    assert_eq!(echo[0], 1.0);
    assert_eq!(echo[2], 1.0);
    assert!((echo[1] - 6.0 / 18.0).abs() < 1e-12);
    assert_eq!(echo[1], echo[3]);
}

#[test]
fn edge_ratio_quadrants() {
    let closed = build_graph(&fixture(false, false), SUB, 2010, 1).unwrap();
    let open = build_graph(&fixture(false, true), SUB, 2010, 1).unwrap();
    assert_eq!(echo_chamber(&closed, EchoMode::EdgeRatio).unwrap(), 0.0);
    // 12 boundary edges out of 18
    assert!((echo_chamber(&open, EchoMode::EdgeRatio).unwrap() - 12.0 / 18.0).abs() < 1e-12);
}

#[test]
fn window_excludes_target_year_and_older_papers() {
    let a = |s: &str| s.to_owned();
    let papers = vec![
        paper(a("old"), 1999, SUB, &[a("u1"), a("u2")]),
        paper(a("in"), 2009, SUB, &[a("u3"), a("u4")]),
        paper(a("now"), 2010, SUB, &[a("u5"), a("u6")]),
    ];
    let corpus = Corpus::from_records(papers).unwrap();
    let g = build_graph(&corpus, SUB, 2010, 1).unwrap();
    assert_eq!(g.window, (2000, 2009));
    assert_eq!(g.members.iter().cloned().collect::<Vec<_>>(), vec![a("u3"), a("u4")]);
    assert_eq!(g.edges.len(), 1);
    // the 1999 paper enters once the window slides back
    let g = build_graph(&corpus, SUB, 2009, 1).unwrap();
    assert_eq!(g.members.len(), 2);
    assert!(g.members.contains("u1"));
}

#[test]
fn sparse_flag_follows_floor() {
    let corpus = fixture(true, false);
    assert!(build_graph(&corpus, SUB, 2010, 50).unwrap().sparse);
    assert!(!build_graph(&corpus, SUB, 2010, 6).unwrap().sparse);
}

#[test]
fn tag_lookup_is_case_insensitive_and_suggests() {
    let corpus = fixture(false, true);
    assert_eq!(build_graph(&corpus, "spectral GRAPH theory", 2010, 1).unwrap().subfield, SUB);
    match build_graph(&corpus, "Topolgy", 2010, 1) {
        Err(Error::UnknownTag { nearest, .. }) => assert_eq!(nearest[0], "Topology"),
        other => panic!("{other:?}"),
    }
}
