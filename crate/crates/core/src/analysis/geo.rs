use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::PaperRecord;
use crate::error::{Error, Result};
use crate::stats;

const BUNDLED_REGIONS: &str = include_str!("../../data/regions.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Western Europe, North America and Oceania.
    Western,
    /// Eastern Europe and Central Asia.
    EeCa,
    EastAsiaPacific,
    SouthAsia,
    LatinAmericaCaribbean,
    MiddleEastAfrica,
    Unassigned,
}

impl Region {
    pub const GROUPS: [Region; 6] = [
        Region::Western,
        Region::EeCa,
        Region::EastAsiaPacific,
        Region::SouthAsia,
        Region::LatinAmericaCaribbean,
        Region::MiddleEastAfrica,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Western => "western",
            Region::EeCa => "ee_ca",
            Region::EastAsiaPacific => "east_asia_pacific",
            Region::SouthAsia => "south_asia",
            Region::LatinAmericaCaribbean => "latin_america_caribbean",
            Region::MiddleEastAfrica => "middle_east_africa",
            Region::Unassigned => "unassigned",
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Region::GROUPS
            .into_iter()
            .chain([Region::Unassigned])
            .find(|r| r.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Invalid(format!("unknown region {s:?}")))
    }
}

/// Country code to regional group. Codes absent from the map fall into
/// [`Region::Unassigned`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionMap {
    map: BTreeMap<String, Region>,
}

impl RegionMap {
    /// Parses `country,region` CSV with a header row.
    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut map = BTreeMap::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let parse_err = |message: String| Error::Parse { path: source.to_owned(), line, message };
            let (Some(code), Some(region)) = (rec.get(0), rec.get(1)) else {
                return Err(parse_err("expected country,region".into()));
            };
            let region = region.parse::<Region>().map_err(|e| parse_err(e.to_string()))?;
            if map.insert(code.to_ascii_uppercase(), region).is_some() {
                return Err(Error::DuplicateKey(format!("country {code}")));
            }
        }
        Ok(Self { map })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// The six-group map shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_REGIONS, Path::new("data/regions.csv")).expect("bundled region map parses")
    }

    pub fn region_of(&self, country: &str) -> Region {
        self.map.get(&country.to_ascii_uppercase()).copied().unwrap_or(Region::Unassigned)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Country of a paper: the shared country of its first and last authors.
/// Papers whose first and last authors differ, or lack a country, have none.
pub fn assign_country(paper: &PaperRecord) -> Option<String> {
    let first = paper.authors.first()?.country.as_deref()?;
    let last = paper.authors.last()?.country.as_deref()?;
    (first == last).then(|| first.to_owned())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoItem {
    pub country: String,
    pub year: i32,
    pub certainty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoOptions {
    pub min_papers: usize,
    pub trend_years: (i32, i32),
    pub trend_alpha: f64,
}

impl Default for GeoOptions {
    fn default() -> Self {
        Self { min_papers: 50, trend_years: (2000, 2020), trend_alpha: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryRow {
    pub country: String,
    pub region: Region,
    pub mean: f64,
    pub n: usize,
    /// Spearman correlation between year and annual mean certainty.
    pub trend: Option<f64>,
    pub trend_p: Option<f64>,
    pub trend_masked: bool,
    pub trend_years: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub region: Region,
    pub mean: f64,
    pub n_papers: usize,
    pub n_countries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoSummary {
    pub field: String,
    pub countries: Vec<CountryRow>,
    pub regions: Vec<RegionRow>,
    /// Countries below the paper floor, with their counts.
    pub omitted: BTreeMap<String, usize>,
}

/// Country means (countries under `min_papers` omitted), per-country year
/// trends, and region means weighted by country paper counts.
pub fn geographic_summary(items: &[GeoItem], field: &str, regions: &RegionMap, opts: &GeoOptions) -> Result<GeoSummary> {
    if !(opts.trend_alpha > 0.0 && opts.trend_alpha < 1.0) {
        return Err(Error::Invalid(format!("alpha {} not in (0, 1)", opts.trend_alpha)));
    }
    let mut by_country: BTreeMap<&str, Vec<&GeoItem>> = BTreeMap::new();
    for it in items {
        by_country.entry(it.country.as_str()).or_default().push(it);
    }
    let mut countries = Vec::new();
    let mut omitted = BTreeMap::new();
    let mut unassigned = BTreeSet::new();
    for (country, papers) in by_country {
        let n = papers.len();
        if n < opts.min_papers {
            omitted.insert(country.to_owned(), n);
            continue;
        }
        let region = regions.region_of(country);
        if region == Region::Unassigned {
            unassigned.insert(country);
        }
        let mean = papers.iter().map(|p| p.certainty).sum::<f64>() / n as f64;
        let mut annual: BTreeMap<i32, (f64, usize)> = BTreeMap::new();
        for p in papers.iter().filter(|p| p.year >= opts.trend_years.0 && p.year <= opts.trend_years.1) {
            let e = annual.entry(p.year).or_default();
            e.0 += p.certainty;
            e.1 += 1;
        }
        let years: Vec<f64> = annual.keys().map(|&y| f64::from(y)).collect();
        let means: Vec<f64> = annual.values().map(|(s, k)| s / *k as f64).collect();
        let trend = if years.len() >= 3 { stats::spearman(&years, &means).ok() } else { None };
        countries.push(CountryRow {
            country: country.to_owned(),
            region,
            mean,
            n,
            trend: trend.as_ref().map(|t| t.coefficient),
            trend_p: trend.as_ref().map(|t| t.p_value),
            trend_masked: trend.as_ref().is_none_or(|t| stats::is_masked(t.p_value, opts.trend_alpha)),
            trend_years: years.len(),
        });
    }
    if !unassigned.is_empty() {
        log::warn!("{field}: countries missing from the region map: {}", unassigned.into_iter().collect::<Vec<_>>().join(", "));
    }
    let mut acc: BTreeMap<Region, (f64, usize, usize)> = BTreeMap::new();
    for c in &countries {
        let e = acc.entry(c.region).or_default();
        e.0 += c.mean * c.n as f64;
        e.1 += c.n;
        e.2 += 1;
    }
    let regions = acc
        .into_iter()
        .map(|(region, (s, n, k))| RegionRow { region, mean: s / n as f64, n_papers: n, n_countries: k })
        .collect();
    Ok(GeoSummary { field: field.to_owned(), countries, regions, omitted })
}

/// Region averages pooled over several fields (weighted by paper counts),
/// then min-max scaled to [0, 1] across the assigned regions present. When
/// every region has the same average all scaled values are 0.
pub fn normalize_region_averages(summaries: &[&GeoSummary]) -> Vec<(Region, f64, f64, usize)> {
    let mut acc: BTreeMap<Region, (f64, usize)> = BTreeMap::new();
    for s in summaries {
        for r in s.regions.iter().filter(|r| r.region != Region::Unassigned) {
            let e = acc.entry(r.region).or_default();
            e.0 += r.mean * r.n_papers as f64;
            e.1 += r.n_papers;
        }
    }
    let pooled: Vec<(Region, f64, usize)> = acc.into_iter().map(|(r, (s, n))| (r, s / n as f64, n)).collect();
    let lo = pooled.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = pooled.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    pooled
        .into_iter()
        .map(|(r, m, n)| {
            let scaled = if hi > lo { (m - lo) / (hi - lo) } else { 0.0 };
            (r, m, scaled, n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AuthorRef, PaperRecord};

    fn paper(countries: &[Option<&str>]) -> PaperRecord {
        PaperRecord {
            paper_id: "p".into(),
            title: String::new(),
            abstract_text: "x".into(),
            year: 2000,
            language: None,
            field_tags: vec![],
            authors: countries
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let a = AuthorRef::new(format!("a{i}"));
                    match c {
                        Some(c) => a.with_country(*c),
                        None => a,
                    }
                })
                .collect(),
            journal_rank: None,
            citation_count: 0,
            tweet_count: None,
        }
    }

    #[test]
    fn country_rule() {
        assert_eq!(assign_country(&paper(&[Some("US"), Some("DE"), Some("US")])), Some("US".into()));
        assert_eq!(assign_country(&paper(&[Some("US"), Some("DE")])), None);
        assert_eq!(assign_country(&paper(&[Some("JP")])), Some("JP".into()));
        assert_eq!(assign_country(&paper(&[None, Some("JP")])), None);
        assert_eq!(assign_country(&paper(&[])), None);
    }

    fn items(country: &str, n: usize, f: impl Fn(usize) -> (i32, f64)) -> Vec<GeoItem> {
        (0..n)
            .map(|i| {
                let (year, certainty) = f(i);
                GeoItem { country: country.into(), year, certainty }
            })
            .collect()
    }

    #[test]
    fn floor_omits_small_countries() {
        let mut v = items("US", 50, |_| (2000, 2.0));
        v.extend(items("DE", 49, |_| (2000, 2.0)));
        let s = geographic_summary(&v, "Physics", &RegionMap::bundled(), &GeoOptions::default()).unwrap();
        assert_eq!(s.countries.len(), 1);
        assert_eq!(s.countries[0].country, "US");
        assert_eq!(s.omitted["DE"], 49);
    }

    #[test]
    fn decreasing_country_trend() {
        let v = items("FR", 63, |i| (2000 + (i % 21) as i32, 3.0 - (i % 21) as f64 * 0.05));
        let s = geographic_summary(&v, "Physics", &RegionMap::bundled(), &GeoOptions::default()).unwrap();
        let c = &s.countries[0];
        assert_eq!(c.trend, Some(-1.0));
        assert!(!c.trend_masked);
        assert_eq!(c.trend_years, 21);
    }

    #[test]
    fn equal_regions_equal_averages() {
        let mut v = items("US", 60, |i| (2000, 1.0 + (i % 3) as f64));
        v.extend(items("RU", 90, |i| (2001, 1.0 + (i % 3) as f64)));
        let s = geographic_summary(&v, "f", &RegionMap::bundled(), &GeoOptions::default()).unwrap();
        assert_eq!(s.regions.len(), 2);
        assert_eq!(s.regions[0].mean, s.regions[1].mean);
        let norm = normalize_region_averages(&[&s]);
        assert!(norm.iter().all(|(_, _, scaled, _)| *scaled == 0.0));
    }

    #[test]
    fn unmapped_country_is_unassigned() {
        let v = items("ZZ", 50, |_| (2000, 2.0));
        let s = geographic_summary(&v, "f", &RegionMap::bundled(), &GeoOptions::default()).unwrap();
        assert_eq!(s.regions[0].region, Region::Unassigned);
        assert!(normalize_region_averages(&[&s]).is_empty());
    }

    #[test]
    fn region_mean_weighted_by_papers() {
        let mut v = items("US", 50, |_| (2000, 1.0));
        v.extend(items("GB", 150, |_| (2000, 3.0)));
        v.extend(items("CN", 50, |_| (2000, 2.0)));
        let opts = GeoOptions::default();
        let s = geographic_summary(&v, "f", &RegionMap::bundled(), &opts).unwrap();
        let west = s.regions.iter().find(|r| r.region == Region::Western).unwrap();
        assert_eq!(west.mean, 2.5);
        assert_eq!(west.n_countries, 2);
        v.reverse();
        assert_eq!(geographic_summary(&v, "f", &RegionMap::bundled(), &opts).unwrap().regions, s.regions);
        let norm = normalize_region_averages(&[&s]);
        assert_eq!(norm.iter().map(|n| n.2).collect::<Vec<_>>(), vec![1.0, 0.0]);
    }

    #[test]
    fn bundled_map_covers_six_groups() {
        let m = RegionMap::bundled();
        assert!(m.len() > 180);
        assert_eq!(m.region_of("us"), Region::Western);
        assert_eq!(m.region_of("KZ"), Region::EeCa);
        assert_eq!(m.region_of("IN"), Region::SouthAsia);
    }
}
