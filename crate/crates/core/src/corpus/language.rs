//! English detection for records that carry no language field.
//!
//! Scores text by the share of its character trigrams that fall in a fixed
//! set of trigrams frequent in English and rare in the major Romance and
//! Germanic languages. English abstracts score roughly 0.11-0.30; German,
//! French, Spanish, Italian and Portuguese abstracts stay under 0.06.

use std::collections::HashSet;
use std::sync::OnceLock;

/// Minimum trigram share for text to count as English.
pub const ENGLISH_THRESHOLD: f64 = 0.07;

const ENGLISH_TRIGRAMS: &[&str] = &[
    " th", "the", "he ", " of", "of ", "and", " an", "nd ", " in", "ed ", " to", "to ", "ing",
    "ng ", "at ", "in ", " is", "is ", " be", " fo", "for", "or ", "hat", "tha", "ts ", " wh",
    " we", "ere", "ly ", "ith", "wit", " wi", "his", " ha", "are", " ar", "ese", "ich", "hic",
    "ow ", "ve ", " so", "s o", "d t", "e t", " by", "by ", "was", " wa", "our", "ur ", "hes",
    "ey ", "ty ", "th ", " it", "it ", "her", " sh", "how", "ws ",
];

fn trigram_set() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| ENGLISH_TRIGRAMS.iter().copied().collect())
}

/// Share of the text's character trigrams that are common English trigrams.
pub fn english_score(text: &str) -> f64 {
    let mut norm = String::with_capacity(text.len() + 2);
    norm.push(' ');
    let mut last_space = true;
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_lowercase() {
            norm.push(c);
            last_space = false;
        } else if !last_space {
            norm.push(' ');
            last_space = true;
        }
    }
    if !last_space {
        norm.push(' ');
    }
    let bytes = norm.as_bytes();
    if bytes.len() < 3 {
        return 0.0;
    }
    let set = trigram_set();
    let total = bytes.len() - 2;
    let hits = bytes
        .windows(3)
        .filter(|w| std::str::from_utf8(w).is_ok_and(|s| set.contains(s)))
        .count();
    hits as f64 / total as f64
}

pub fn is_english(text: &str) -> bool {
    english_score(text) >= ENGLISH_THRESHOLD
}
