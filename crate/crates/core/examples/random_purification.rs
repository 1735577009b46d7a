//! Random purification: produce `m` copies of a Haar-random purification
//! of `rho` from `n` copies, and compare one-site losses with the
//! tomography baseline.
//!
//! cargo run --release --example random_purification

use cqi::cloning_rp::formulas::{to_f64, RpSpec};
use cqi::cloning_rp::{f_one_bound, separation_table, PurifyAndClone, TwirlMode};
use cqi::numerics::random::{haar_unitary, seeded_rng};
use cqi::numerics::state_with_spectrum;

fn main() -> cqi::Result<()> {
    let rho = state_with_spectrum(&[0.7, 0.3], &haar_unitary(2, &mut seeded_rng(2)))?;
    println!("purify-and-clone on a qubit with spectrum (0.7, 0.3)");
    for (n, m, r) in [(1, 2, 2), (2, 3, 2), (2, 2, 2), (1, 3, 2)] {
        let spec = RpSpec::new(n, m, 2, r)?;
        let rep = PurifyAndClone::new(spec)?.report(&rho, TwirlMode::Exact)?;
        println!(
            "  n={n} m={m} r={r}: all-site {:.5}  one-site {:.5}  (f_one over C^{{dr}}: {:.5})",
            rep.all_site_purified,
            rep.one_site_purified[0],
            to_f64(&f_one_bound(&spec))
        );
    }

    let ns: Vec<usize> = (8..=64).step_by(8).collect();
    let table = separation_table(2, 1, 1, &ns)?;
    println!("\none-site infidelity at m = n + 1, d = 2");
    println!("{:>4} {:>12} {:>12} {:>12}", "n", "coherent", "tomography", "brute force");
    for row in &table.rows {
        let bf = row.brute_force.map(|x| format!("{x:.4e}")).unwrap_or_else(|| "-".into());
        println!("{:>4} {:>12.4e} {:>12.4e} {bf:>12}", row.n, row.coherent, row.eb);
    }
    println!(
        "log-log slopes: coherent {:.3}, tomography {:.3}",
        table.coherent_fit.slope, table.eb_fit.slope
    );
    Ok(())
}
