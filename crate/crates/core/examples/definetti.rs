//! Distance of symmetric marginal channels from measure-and-prepare
//! channels as the number of extensions grows.
//!
//! cargo run --release --example definetti

use cqi::framework::{definetti_bound, definetti_gap, symmetric_marginal_channel};
use cqi::numerics::stats::loglog_fit;
use cqi::schur::symmetric_dim;

fn main() -> cqi::Result<()> {
    let d = 2;
    println!("{:>3} {:>12} {:>12}", "m", "gap", "bound");
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for m in 2..=10 {
        let gap = definetti_gap(symmetric_marginal_channel(d, m)?.choi(), d, m)?;
        println!("{m:>3} {gap:>12.5} {:>12.5}", definetti_bound(symmetric_dim(d, m), d, m));
        xs.push(m as f64);
        ys.push(gap);
    }
    println!("decay exponent {:.3}", loglog_fit(&xs, &ys).slope);
    Ok(())
}
