//! Windowed coauthorship graphs of subfield communities, with degree
//! inequality (Gini via the Lorenz curve) and echo-chamber metrics.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, MAX_FIELD_LEVEL};
use crate::error::{Error, Result};

/// Years of literature preceding the target year that form a graph.
pub const WINDOW_YEARS: i32 = 10;
/// Graphs with fewer community members are flagged sparse.
pub const MIN_MEMBERS: usize = 50;

/// Undirected weighted coauthorship graph around one subfield community.
///
/// `members` authored papers tagged with the subfield inside the window;
/// `neighbors` are their coauthors (on any window paper) outside the
/// community. Edges join two members or a member and a neighbor; the weight
/// counts distinct window papers the pair coauthored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoauthorGraph {
    pub subfield: String,
    /// Inclusive year range.
    pub window: (i32, i32),
    pub members: BTreeSet<String>,
    pub neighbors: BTreeSet<String>,
    /// Keyed by (smaller id, larger id).
    pub edges: BTreeMap<(String, String), u32>,
    pub sparse: bool,
}

impl CoauthorGraph {
    /// Builds a graph directly from parts, checking the structural invariants.
    pub fn from_parts(
        subfield: impl Into<String>,
        window: (i32, i32),
        members: BTreeSet<String>,
        edges: impl IntoIterator<Item = (String, String, u32)>,
        min_members: usize,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut neighbors = BTreeSet::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::Invalid(format!("self-loop on {a}")));
            }
            if w == 0 {
                return Err(Error::Invalid(format!("edge {a}-{b} has zero weight")));
            }
            let (am, bm) = (members.contains(&a), members.contains(&b));
            if !am && !bm {
                return Err(Error::Invalid(format!("edge {a}-{b} does not touch the community")));
            }
            if !am {
                neighbors.insert(a.clone());
            }
            if !bm {
                neighbors.insert(b.clone());
            }
            let key = if a < b { (a, b) } else { (b, a) };
            *map.entry(key).or_insert(0) += w;
        }
        let sparse = members.len() < min_members;
        Ok(Self { subfield: subfield.into(), window, members, neighbors, edges: map, sparse })
    }

    /// Weighted degree of every member over member-member edges, in member order.
    pub fn member_degrees(&self) -> Vec<f64> {
        let mut deg: BTreeMap<&str, f64> = self.members.iter().map(|m| (m.as_str(), 0.0)).collect();
        for ((a, b), &w) in &self.edges {
            if self.members.contains(a) && self.members.contains(b) {
                *deg.get_mut(a.as_str()).expect("member") += f64::from(w);
                *deg.get_mut(b.as_str()).expect("member") += f64::from(w);
            }
        }
        deg.into_values().collect()
    }

    /// Total weight of member-neighbor edges and of all edges touching a member.
    pub fn boundary_and_incident_weight(&self) -> (u64, u64) {
        let mut boundary = 0u64;
        let mut incident = 0u64;
        for ((a, b), &w) in &self.edges {
            let crossing = self.members.contains(a) != self.members.contains(b);
            incident += u64::from(w);
            if crossing {
                boundary += u64::from(w);
            }
        }
        (boundary, incident)
    }

    /// Edge list as TSV: `author_a, author_b, weight, a_member, b_member`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "author_a\tauthor_b\tweight\ta_member\tb_member")?;
        for ((a, b), w) in &self.edges {
            writeln!(out, "{a}\t{b}\t{w}\t{}\t{}", self.members.contains(a), self.members.contains(b))?;
        }
        Ok(())
    }
}

fn nearest_tags(tag: &str, known: &BTreeSet<String>) -> Vec<String> {
    let lower = tag.to_lowercase();
    let mut scored: Vec<(usize, &String)> = known
        .iter()
        .map(|k| (strsim::levenshtein(&lower, &k.to_lowercase()), k))
        .collect();
    scored.sort();
    scored.into_iter().take(3).map(|(_, k)| k.clone()).collect()
}

/// Coauthorship graph of `subfield` from papers published in
/// `[year - 10, year - 1]`. Papers of `year` itself never contribute.
pub fn build_graph(corpus: &Corpus, subfield: &str, year: i32, min_members: usize) -> Result<CoauthorGraph> {
    let known = corpus.tags(MAX_FIELD_LEVEL);
    let Some(canonical) = known.iter().find(|k| k.eq_ignore_ascii_case(subfield)).cloned() else {
        return Err(Error::UnknownTag { tag: subfield.to_owned(), nearest: nearest_tags(subfield, &known) });
    };
    let window = (year - WINDOW_YEARS, year - 1);
    let in_window = |y: i32| y >= window.0 && y <= window.1;

    let members: BTreeSet<String> = corpus
        .records()
        .iter()
        .filter(|p| in_window(p.year) && p.has_tag(MAX_FIELD_LEVEL, &canonical))
        .flat_map(|p| p.authors.iter().map(|a| a.author_id.clone()))
        .collect();

    // every window paper with at least one member, each counted once
    let mut papers: BTreeSet<&str> = BTreeSet::new();
    for m in &members {
        for p in corpus.papers_by_author(m).filter(|p| in_window(p.year)) {
            papers.insert(p.paper_id.as_str());
        }
    }
    let mut edges: Vec<(String, String, u32)> = Vec::new();
    for id in papers {
        let paper = corpus.get(id).expect("indexed paper");
        let authors: BTreeSet<&str> = paper.authors.iter().map(|a| a.author_id.as_str()).collect();
        let authors: Vec<&str> = authors.into_iter().collect();
        for (i, a) in authors.iter().enumerate() {
            for b in &authors[i + 1..] {
                if members.contains(*a) || members.contains(*b) {
                    edges.push(((*a).to_owned(), (*b).to_owned(), 1));
                }
            }
        }
    }
    CoauthorGraph::from_parts(canonical, window, members, edges, min_members)
}

/// Lorenz curve of a nonnegative sequence: cumulative population share
/// against cumulative value share, values sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzCurve {
    pub points: Vec<(f64, f64)>,
}

impl LorenzCurve {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("Lorenz curve of an empty sequence".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Invalid("Lorenz curve needs finite nonnegative values".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let total: f64 = sorted.iter().sum();
        let n = sorted.len() as f64;
        let mut points = Vec::with_capacity(sorted.len() + 1);
        points.push((0.0, 0.0));
        let mut acc = 0.0;
        for (i, v) in sorted.iter().enumerate() {
            acc += v;
            let y = if total > 0.0 { acc / total } else { (i + 1) as f64 / n };
            points.push(((i + 1) as f64 / n, y));
        }
        if let Some(last) = points.last_mut() {
            *last = (1.0, 1.0);
        }
        Ok(Self { points })
    }

    /// Trapezoid area under the curve.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum()
    }

    /// One minus twice the area under the curve.
    pub fn gini(&self) -> f64 {
        (1.0 - 2.0 * self.area()).max(0.0)
    }
}

/// Gini coefficient of a nonnegative sequence; 0 when every value is 0.
pub fn gini(values: &[f64]) -> Result<f64> {
    if values.iter().all(|&v| v == 0.0) && !values.is_empty() {
        log::warn!("all degrees are zero; Gini defined as 0");
        return Ok(0.0);
    }
    let curve = LorenzCurve::from_values(values)?;
    // a uniform sequence lies on the diagonal; skip the rounding in the area sum
    if values.iter().all(|&v| v == values[0]) {
        return Ok(0.0);
    }
    Ok(curve.gini())
}

/// Degree inequality of the community: Gini of member weighted degrees over
/// member-member edges.
pub fn gini_centrality(graph: &CoauthorGraph) -> Result<f64> {
    if graph.members.len() < 2 {
        return Err(Error::Invalid(format!(
            "Gini centrality needs at least 2 members, {} has {}",
            graph.subfield,
            graph.members.len()
        )));
    }
    gini(&graph.member_degrees())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EchoMode {
    /// |M| / (|M| + |N|)
    #[default]
    NodeRatio,
    /// Weight of member-neighbor edges over weight of all edges touching M.
    EdgeRatio,
}

pub fn echo_chamber(graph: &CoauthorGraph, mode: EchoMode) -> Result<f64> {
    if graph.members.is_empty() {
        return Err(Error::Invalid(format!("subfield {} has no community members", graph.subfield)));
    }
    Ok(match mode {
        EchoMode::NodeRatio => graph.members.len() as f64 / (graph.members.len() + graph.neighbors.len()) as f64,
        EchoMode::EdgeRatio => {
            let (boundary, incident) = graph.boundary_and_incident_weight();
            if incident == 0 {
                log::warn!("subfield {} has no coauthorship edges; edge ratio defined as 0", graph.subfield);
                0.0
            } else {
                boundary as f64 / incident as f64
            }
        }
    })
}

/// Per (subfield, year) metric row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkMetrics {
    pub subfield: String,
    pub year: i32,
    pub gini: Option<f64>,
    pub echo_node: f64,
    pub echo_edge: f64,
    pub members: usize,
    pub neighbors: usize,
    pub sparse: bool,
}

pub fn network_metrics(graph: &CoauthorGraph, year: i32) -> Result<NetworkMetrics> {
    Ok(NetworkMetrics {
        subfield: graph.subfield.clone(),
        year,
        gini: gini_centrality(graph).ok(),
        echo_node: echo_chamber(graph, EchoMode::NodeRatio)?,
        echo_edge: echo_chamber(graph, EchoMode::EdgeRatio)?,
        members: graph.members.len(),
        neighbors: graph.neighbors.len(),
        sparse: graph.sparse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AuthorRef, FieldTag, PaperRecord};

    fn paper(id: &str, year: i32, sub: Option<&str>, authors: &[&str]) -> PaperRecord {
        let mut tags = vec![FieldTag::new(0, "Physics")];
        if let Some(s) = sub {
            tags.push(FieldTag::new(5, s));
        }
        PaperRecord {
            paper_id: id.into(),
            title: String::new(),
            abstract_text: "x".into(),
            year,
            language: None,
            field_tags: tags,
            authors: authors.iter().map(|a| AuthorRef::new(*a)).collect(),
            journal_rank: None,
            citation_count: 0,
            tweet_count: None,
        }
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn e(a: &str, b: &str) -> (String, String, u32) {
        (a.into(), b.into(), 1)
    }

    #[test]
    fn repeated_pair_has_weight_two() {
        let c = Corpus::from_records(vec![
            paper("1", 2000, Some("Optics"), &["a", "b"]),
            paper("2", 2001, Some("Optics"), &["b", "a"]),
        ])
        .unwrap();
        let g = build_graph(&c, "Optics", 2005, MIN_MEMBERS).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[&("a".into(), "b".into())], 2);
        assert!(g.sparse);
    }

    #[test]
    fn three_authors_form_a_triangle() {
        let c = Corpus::from_records(vec![paper("1", 2000, Some("Optics"), &["a", "b", "c"])]).unwrap();
        let g = build_graph(&c, "optics", 2001, 1).unwrap();
        assert_eq!(g.edges.len(), 3);
        assert!(g.edges.values().all(|&w| w == 1));
        assert_eq!(g.member_degrees(), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn neighbors_come_from_other_papers_in_window() {
        let c = Corpus::from_records(vec![
            paper("1", 2000, Some("Optics"), &["a", "b"]),
            paper("2", 2001, Some("Acoustics"), &["b", "x"]),
            paper("3", 2001, Some("Acoustics"), &["x", "y"]),
            paper("4", 1980, Some("Acoustics"), &["a", "z"]),
        ])
        .unwrap();
        let g = build_graph(&c, "Optics", 2005, 1).unwrap();
        assert_eq!(g.members, set(&["a", "b"]));
        assert_eq!(g.neighbors, set(&["x"]));
        assert!(!g.edges.contains_key(&("x".into(), "y".into())));
    }

    #[test]
    fn target_year_is_not_in_its_own_graph() {
        let c = Corpus::from_records(vec![
            paper("old", 2009, Some("Optics"), &["a", "b"]),
            paper("new", 2010, Some("Optics"), &["c", "d"]),
        ])
        .unwrap();
        let g = build_graph(&c, "Optics", 2010, 1).unwrap();
        assert_eq!(g.window, (2000, 2009));
        assert_eq!(g.members, set(&["a", "b"]));
    }

    #[test]
    fn unknown_tag_lists_nearest() {
        let c = Corpus::from_records(vec![paper("1", 2000, Some("Optics"), &["a"])]).unwrap();
        match build_graph(&c, "Optcs", 2001, 1) {
            Err(Error::UnknownTag { nearest, .. }) => assert_eq!(nearest, vec!["Optics".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_gini_reconciles_both_estimators() {
        let d = [1.0, 1.0, 1.0, 1.0, 4.0];
        let trapezoid = gini(&d).unwrap();
        // pairwise: sum |di - dj| = 24 over ordered pairs, 2 n^2 mean = 80
        assert!((trapezoid - 0.3).abs() < 1e-12);
    }

    #[test]
    fn uniform_degrees_are_zero() {
        assert_eq!(gini(&[3.0; 7]).unwrap(), 0.0);
        assert_eq!(gini(&[0.0; 4]).unwrap(), 0.0);
    }

    #[test]
    fn lorenz_shape() {
        let l = LorenzCurve::from_values(&[5.0, 0.0, 1.0, 2.0]).unwrap();
        assert_eq!(l.points.first(), Some(&(0.0, 0.0)));
        assert_eq!(l.points.last(), Some(&(1.0, 1.0)));
        for w in l.points.windows(2) {
            assert!(w[1].1 >= w[0].1 && w[1].1 <= w[1].0 + 1e-15);
        }
    }

    #[test]
    fn appendix_echo_example() {
        let m = set(&["m1", "m2", "m3", "m4", "m5"]);
        let edges = vec![e("m1", "m2"), e("m2", "m3"), e("m3", "m4"), e("m4", "m5"), e("m1", "n1"), e("m3", "n2")];
        let g = CoauthorGraph::from_parts("s", (0, 9), m, edges, 1).unwrap();
        assert_eq!(g.neighbors.len(), 2);
        assert!((echo_chamber(&g, EchoMode::NodeRatio).unwrap() - 5.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn edge_ratio_counts_boundary_weight() {
        let m = set(&["a", "b", "c"]);
        let edges = vec![e("a", "b"), e("b", "c"), e("a", "c"), e("c", "x")];
        let g = CoauthorGraph::from_parts("s", (0, 9), m, edges, 1).unwrap();
        assert_eq!(echo_chamber(&g, EchoMode::EdgeRatio).unwrap(), 0.25);
    }

    #[test]
    fn isolated_community_has_node_ratio_one() {
        let g = CoauthorGraph::from_parts("s", (0, 9), set(&["a", "b"]), vec![e("a", "b")], 1).unwrap();
        assert_eq!(echo_chamber(&g, EchoMode::NodeRatio).unwrap(), 1.0);
    }

    #[test]
    fn invariants_enforced() {
        assert!(CoauthorGraph::from_parts("s", (0, 9), set(&["a"]), vec![e("a", "a")], 1).is_err());
        assert!(CoauthorGraph::from_parts("s", (0, 9), set(&["a"]), vec![e("x", "y")], 1).is_err());
        assert!(CoauthorGraph::from_parts("s", (0, 9), set(&["a"]), vec![("a".into(), "b".into(), 0)], 1).is_err());
    }

    #[test]
    fn edge_list_export() {
        let g = CoauthorGraph::from_parts("s", (0, 9), set(&["a", "b"]), vec![e("a", "b"), e("b", "z")], 1).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(2), Some("b\tz\t1\ttrue\tfalse"));
    }
}
