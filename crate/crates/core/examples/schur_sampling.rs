//! Weak Schur sampling of `rho^{(x) n}`: projector-based sector weights,
//! the Schur-polynomial formula, and empirical frequencies.
//!
//! cargo run --release --example schur_sampling

use std::collections::BTreeMap;

use cqi::numerics::random::{haar_unitary, seeded_rng};
use cqi::numerics::state_with_spectrum;
use cqi::schur::{schur_sample, sector_decomposition, sector_probabilities};

fn main() -> cqi::Result<()> {
    let p = [0.6, 0.3, 0.1];
    let n = 4;
    let mut rng = seeded_rng(4);
    let rho = state_with_spectrum(&p, &haar_unitary(3, &mut rng))?;
    let big = rho.tensor_power(n);
    let formula: BTreeMap<String, f64> =
        sector_probabilities(&p, n).into_iter().map(|(y, w)| (y.to_string(), w)).collect();
    let draws = 2000;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for _ in 0..draws {
        let (y, _) = schur_sample(&big, &mut rng)?;
        *counts.entry(y.to_string()).or_default() += 1;
    }
    println!("{:>12} {:>10} {:>10} {:>10}", "lambda", "projector", "formula", "sampled");
    for (y, _, w) in sector_decomposition(&big)?.sectors {
        let key = y.to_string();
        let freq = counts.get(&key).copied().unwrap_or(0) as f64 / draws as f64;
        println!("{key:>12} {w:>10.5} {:>10.5} {freq:>10.4}", formula.get(&key).copied().unwrap_or(0.0));
    }
    Ok(())
}
