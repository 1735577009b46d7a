//! Covariant measure-and-prepare eigenstate tomography on a qubit with
//! spectrum (0.8, 0.2): Monte-Carlo infidelity against the first-order law.
//!
//! cargo run --release --example eb_eigenstate_tomography -- [samples]

use cqi::numerics::random::{haar_unitary, seeded_rng};
use cqi::numerics::state_with_spectrum;
use cqi::numerics::stats::linear_fit;
use cqi::qpa::{eb_asymptotic_coefficient, eb_covariant_protocol, SpectrumParams};

fn main() -> cqi::Result<()> {
    let samples: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(400_000);
    let p = [0.8, 0.2];
    let mut rng = seeded_rng(1);
    let rho = state_with_spectrum(&p, &haar_unitary(2, &mut rng))?;
    let coef = eb_asymptotic_coefficient(&SpectrumParams::new(p.to_vec(), 1)?);
    println!("{:>4} {:>10} {:>10} {:>10} {:>10}", "n", "infid", "stderr", "ess", "coef/n");
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for n in [20, 40, 60] {
        let est = eb_covariant_protocol(&rho, n, 1, samples, 7 + n as u64)?;
        println!(
            "{n:>4} {:>10.5} {:>10.2e} {:>10.0} {:>10.5}",
            est.infidelity(),
            est.stderr,
            est.ess,
            coef / n as f64
        );
        xs.push(1.0 / n as f64);
        ys.push(est.infidelity());
    }
    let fit = linear_fit(&xs, &ys);
    println!("slope vs 1/n: {:.3} (first-order coefficient {:.3})", fit.slope, coef);
    Ok(())
}
