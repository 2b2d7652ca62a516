use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Corpus;
use crate::error::{Error, Result};

/// Pairwise Jaccard indices between the paper sets of level-0 fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    pub fields: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl OverlapMatrix {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a][b]
    }
}

/// |A∩B| / |A∪B|; 0 when both sets are empty.
pub fn jaccard_index<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

pub fn jaccard_overlap<S: AsRef<str>>(fields: &[S], corpus: &Corpus) -> Result<OverlapMatrix> {
    if fields.len() < 2 {
        return Err(Error::Invalid("Jaccard overlap needs at least two fields".into()));
    }
    let sets: Vec<BTreeSet<&str>> = fields
        .iter()
        .map(|f| {
            corpus
                .records()
                .iter()
                .filter(|r| r.has_tag(0, f.as_ref()))
                .map(|r| r.paper_id.as_str())
                .collect()
        })
        .collect();
    for (f, s) in fields.iter().zip(&sets) {
        if s.is_empty() {
            log::warn!("field {:?} has no papers; its overlaps are defined as 0", f.as_ref());
        }
    }
    let n = fields.len();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                if sets[i].is_empty() { 0.0 } else { 1.0 }
            } else {
                jaccard_index(&sets[i], &sets[j])
            };
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    Ok(OverlapMatrix {
        fields: fields.iter().map(|f| f.as_ref().to_owned()).collect(),
        values,
    })
}
