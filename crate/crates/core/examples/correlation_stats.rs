//! Spearman, partial Pearson and Mann-Whitney on a seeded toy sample, with
//! significance masking.
//!
//!     cargo run --example correlation_stats

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use verbal_certainty::stats::{mann_whitney_u, mask_significance, partial_pearson, spearman};

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 60;
    let breadth: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let team: Vec<f64> = breadth.iter().map(|b| (1.0 + 6.0 * b + 2.0 * rng.random::<f64>()).round()).collect();
    // certainty falls with breadth only; team size is a bystander
    let certainty: Vec<f64> = breadth.iter().map(|b| (2.6 - 0.8 * b + 0.3 * rng.random::<f64>()).clamp(1.0, 3.0)).collect();

    let raw = spearman(&team, &certainty)?;
    let partial = partial_pearson(&team, &certainty, &[("breadth", &breadth)])?;
    println!("spearman(team, certainty)         = {:+.3}  p = {:.4}", raw.coefficient, raw.p_value);
    println!("partial(team, certainty | breadth) = {:+.3}  p = {:.4}", partial.coefficient, partial.p_value);
    for m in mask_significance(&[raw, partial], 0.05)? {
        println!("  {:?} masked: {}", m.result.controlled_for, m.masked);
    }

    let tweeted: Vec<f64> = certainty.iter().zip(&breadth).filter(|(_, b)| **b > 0.6).map(|(c, _)| *c).collect();
    let quiet: Vec<f64> = certainty.iter().zip(&breadth).filter(|(_, b)| **b <= 0.6).map(|(c, _)| *c).collect();
    let mw = mann_whitney_u(&tweeted, &quiet)?;
    println!("mann-whitney: U = {}  p = {:.3e}  exact = {}", mw.u, mw.p_value, mw.exact);
    Ok(())
}
