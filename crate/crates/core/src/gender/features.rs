//! Character n-gram extraction for first names.

use std::collections::BTreeMap;

pub const BOUNDARY_START: char = '^';
pub const BOUNDARY_END: char = '$';

/// Lowercased, trimmed name wrapped in boundary markers.
pub fn normalize_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    out.push(BOUNDARY_START);
    out.extend(name.trim().chars().flat_map(char::to_lowercase));
    out.push(BOUNDARY_END);
    out
}

/// Counts of every character n-gram with `min <= n <= max` in the
/// boundary-marked name.
pub fn char_ngrams(name: &str, min: usize, max: usize) -> BTreeMap<String, u32> {
    let chars: Vec<char> = normalize_name(name).chars().collect();
    let mut grams = BTreeMap::new();
    for n in min.max(1)..=max {
        if n > chars.len() {
            break;
        }
        for w in chars.windows(n) {
            *grams.entry(w.iter().collect::<String>()).or_insert(0) += 1;
        }
    }
    grams
}
