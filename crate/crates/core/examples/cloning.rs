//! Optimal symmetric cloning of pure states: simulated fidelities against
//! the closed forms `D_n / D_m` and `(n(m+d) + m - n) / (m(n+d))`.
//!
//! cargo run --release --example cloning

use cqi::cloning_rp::formulas::{to_f64, RpSpec};
use cqi::cloning_rp::{f_all_bound, f_one_bound, SymmetricCloner};
use cqi::numerics::random::{haar_state_vector, seeded_rng};

fn main() -> cqi::Result<()> {
    let mut rng = seeded_rng(5);
    println!("{:>2} {:>2} {:>2} {:>10} {:>10} {:>10} {:>10}", "d", "n", "m", "all", "D_n/D_m", "one-site", "formula");
    for (d, n, m) in [(2, 1, 2), (2, 1, 3), (2, 2, 3), (2, 3, 6), (3, 1, 2), (3, 2, 4), (4, 1, 3)] {
        let spec = RpSpec::new(n, m, d, 1)?;
        let cl = SymmetricCloner::new(n, m, d)?;
        let psi = haar_state_vector(d, &mut rng);
        let all = cl.all_site_fidelity(&psi)?;
        let one = cl.one_site_fidelities(&psi)?;
        let mean_one = one.iter().sum::<f64>() / one.len() as f64;
        println!(
            "{d:>2} {n:>2} {m:>2} {all:>10.6} {:>10.6} {mean_one:>10.6} {:>10.6}",
            to_f64(&f_all_bound(&spec)),
            to_f64(&f_one_bound(&spec))
        );
    }
    Ok(())
}
