//! Correlation and rank tests used by the analyses.
//!
//! P-values: Student-t approximation for Spearman and (partial) Pearson
//! coefficients; for Mann-Whitney U, the exact permutation distribution when
//! `|a|·|b| <= 400` and a tie-corrected normal approximation otherwise.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// Largest `|a|·|b|` for which Mann-Whitney p-values are computed exactly.
pub const EXACT_MWU_MAX_PAIRS: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrResult {
    pub coefficient: f64,
    pub p_value: f64,
    pub n: usize,
    pub controlled_for: Vec<String>,
}

/// Average (1-based) ranks; tied values share the mean of their positions.
pub fn mid_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank (i+1 + j) / 2
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Invalid(format!("series lengths differ: {} vs {}", x.len(), y.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("series contain non-finite values".into()));
    }
    Ok(())
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    if x.len() < 2 {
        return Err(Error::Undefined("Pearson correlation needs at least 2 points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let dx: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let dy: Vec<f64> = y.iter().map(|v| v - my).collect();
    centered_correlation(&dx, &dy)
}

fn centered_correlation(dx: &[f64], dy: &[f64]) -> Result<f64> {
    let sxy: f64 = dx.iter().zip(dy).map(|(a, b)| a * b).sum();
    let sxx: f64 = dx.iter().map(|a| a * a).sum();
    let syy: f64 = dy.iter().map(|b| b * b).sum();
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Two-sided p-value of a correlation coefficient via the t-approximation
/// with `df` degrees of freedom.
pub fn correlation_p_value(r: f64, df: usize) -> f64 {
    if df == 0 {
        return f64::NAN;
    }
    let r2 = r * r;
    if r2 >= 1.0 {
        return 0.0;
    }
    let t = r * (df as f64 / (1.0 - r2)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df > 0");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

/// Spearman rank correlation: Pearson correlation of mid-ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrResult> {
    check_pair(x, y)?;
    if x.len() < 3 {
        return Err(Error::Invalid(format!("Spearman needs at least 3 points, got {}", x.len())));
    }
    let rho = pearson(&mid_ranks(x), &mid_ranks(y))
        .map_err(|_| Error::Undefined("ranks have zero variance".into()))?;
    Ok(CorrResult {
        coefficient: rho,
        p_value: correlation_p_value(rho, x.len() - 2),
        n: x.len(),
        controlled_for: Vec::new(),
    })
}

/// Residuals of the least-squares fit of `target` on the orthonormal basis `q`.
fn residuals(q: &DMatrix<f64>, target: &[f64]) -> DVector<f64> {
    let v = DVector::from_column_slice(target);
    let fitted = q * (q.transpose() * &v);
    v - fitted
}

/// Pearson partial correlation of `x` and `y` given `controls`: the
/// correlation of the residuals of least-squares regressions of `x` and `y`
/// on an intercept plus the control series. A target that the controls
/// explain exactly has partial correlation 0.
pub fn partial_pearson(x: &[f64], y: &[f64], controls: &[(&str, &[f64])]) -> Result<CorrResult> {
    check_pair(x, y)?;
    let n = x.len();
    let k = controls.len();
    if n < k + 3 {
        return Err(Error::Invalid(format!(
            "partial correlation with {k} controls needs more than {} points, got {n}",
            k + 2
        )));
    }
    for (name, c) in controls {
        if c.len() != n {
            return Err(Error::Invalid(format!("control {name} has {} values, expected {n}", c.len())));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("control {name} has non-finite values")));
        }
    }
    let mut design = DMatrix::<f64>::from_element(n, k + 1, 1.0);
    for (j, (_, c)) in controls.iter().enumerate() {
        design.set_column(j + 1, &DVector::from_column_slice(c));
    }
    let qr = design.clone().qr();
    let r = qr.r();
    let scale: Vec<f64> = (0..=k).map(|j| design.column(j).norm()).collect();
    let deficient: Vec<String> = (0..=k)
        .filter(|&j| r[(j, j)].abs() <= 1e-10 * scale[j].max(f64::MIN_POSITIVE))
        .map(|j| if j == 0 { "intercept".to_owned() } else { controls[j - 1].0.to_owned() })
        .collect();
    if !deficient.is_empty() {
        return Err(Error::RankDeficient(deficient));
    }
    let q = qr.q();
    let rx = residuals(&q, x);
    let ry = residuals(&q, y);
    let spread = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / n as f64;
        v.iter().map(|a| (a - m) * (a - m)).sum::<f64>().sqrt()
    };
    let explained = |res: &DVector<f64>, orig: &[f64]| res.norm() <= 1e-9 * spread(orig);
    let names = controls.iter().map(|(s, _)| (*s).to_owned()).collect();
    let df = n - 2 - k;
    if explained(&rx, x) || explained(&ry, y) {
        return Ok(CorrResult {
            coefficient: 0.0,
            p_value: 1.0,
            n,
            controlled_for: names,
        });
    }
    let coefficient = centered_correlation(rx.as_slice(), ry.as_slice())?;
    Ok(CorrResult {
        coefficient,
        p_value: correlation_p_value(coefficient, df),
        n,
        controlled_for: names,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// U statistic of the first sample: pairs (a, b) with a > b, ties counting one half.
    pub u: f64,
    pub p_value: f64,
    pub exact: bool,
}

/// Two-sided Mann-Whitney U test.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Invalid("Mann-Whitney U needs two non-empty samples".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("samples contain non-finite values".into()));
    }
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = mid_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..na].iter().sum();
    let u = rank_sum_a - (na * (na + 1)) as f64 / 2.0;

    if na * nb <= EXACT_MWU_MAX_PAIRS {
        let p_value = exact_mwu_p(&ranks, na);
        return Ok(MannWhitney { u, p_value, exact: true });
    }

    let n = (na + nb) as f64;
    let mean = (na * nb) as f64 / 2.0;
    let tie_term: f64 = tie_group_sizes(&pooled)
        .into_iter()
        .map(|t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let var = (na * nb) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let p_value = if var <= 0.0 {
        1.0
    } else {
        let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
        (2.0 * (1.0 - Normal::standard().cdf(z))).clamp(0.0, 1.0)
    };
    Ok(MannWhitney { u, p_value, exact: false })
}

fn tie_group_sizes(xs: &[f64]) -> Vec<usize> {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .chunk_by(|a, b| a == b)
        .map(<[f64]>::len)
        .filter(|&t| t > 1)
        .collect()
}

/// Exact two-sided p-value under the permutation null: the share of all
/// labelings whose rank-sum deviation from its mean is at least the
/// observed one. Doubled mid-ranks keep every quantity integral.
fn exact_mwu_p(ranks: &[f64], na: usize) -> f64 {
    let n = ranks.len();
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    // count subsets of the smaller group size; the deviation is symmetric
    let (k, observed): (usize, usize) = if na <= n - na {
        (na, doubled[..na].iter().sum())
    } else {
        (n - na, doubled[na..].iter().sum())
    };
    let centre = (k * (n + 1)) as i64;
    let obs_dev = (observed as i64 - centre).abs();

    let max_sum: usize = doubled.iter().sum();
    // ways[c][s]: subsets of size c with doubled rank sum s
    let mut ways = vec![vec![0u128; max_sum + 1]; k + 1];
    ways[0][0] = 1;
    for &d in &doubled {
        for c in (1..=k).rev() {
            let (lo, hi) = ways.split_at_mut(c);
            let prev = &lo[c - 1];
            let cur = &mut hi[0];
            for s in (d..=max_sum).rev() {
                if prev[s - d] != 0 {
                    cur[s] += prev[s - d];
                }
            }
        }
    }
    let mut extreme = 0u128;
    let mut total = 0u128;
    for (s, &w) in ways[k].iter().enumerate() {
        if w == 0 {
            continue;
        }
        total += w;
        if (s as i64 - centre).abs() >= obs_dev {
            extreme += w;
        }
    }
    (extreme as f64 / total as f64).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskedCorr {
    pub result: CorrResult,
    pub masked: bool,
}

/// Masks every result whose p-value exceeds `alpha`; p == alpha stays visible.
pub fn is_masked(p_value: f64, alpha: f64) -> bool {
    !(p_value <= alpha)
}

pub fn mask_significance(series: &[CorrResult], alpha: f64) -> Result<Vec<MaskedCorr>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Invalid(format!("alpha {alpha} not in (0, 1)")));
    }
    Ok(series
        .iter()
        .map(|r| MaskedCorr {
            result: r.clone(),
            masked: is_masked(r.p_value, alpha),
        })
        .collect())
}
