//! Forwarding a pure state versus measuring it first: the coherent protocol
//! is exact, while any measure-and-prepare protocol pays `(d-1)/(n+d)`.
//!
//! cargo run --release --example identity_task

use cqi::framework::{average_risk, eb_channel, haar_pure_sampler, CqiTask, FinitePovm, Loss};
use cqi::numerics::random::seeded_rng;
use cqi::numerics::{haar_pure_state, Channel, DensityOperator};
use cqi::qpa::eb_covariant_protocol;

fn main() -> cqi::Result<()> {
    println!("one copy, average infidelity over Haar-random pure inputs");
    println!("{:>3} {:>10} {:>14} {:>10}", "d", "forward", "basis m&p", "(d-1)/(d+1)");
    for d in 2..=4 {
        let task = CqiTask::identity(haar_pure_sampler(d), d, Loss::Infidelity);
        let forward = average_risk(&task, &Channel::identity(d), 5000, 1)?;
        let prep: Vec<DensityOperator> = (0..d).map(|i| DensityOperator::basis(d, i)).collect();
        let measured = average_risk(&task, &eb_channel(&FinitePovm::computational(d), &prep)?, 5000, 1)?;
        println!(
            "{d:>3} {:>10.2e} {:>8.4}+-{:.4} {:>10.4}",
            forward.value,
            measured.value,
            measured.stderr,
            (d - 1) as f64 / (d + 1) as f64
        );
    }

    println!("\nn copies, optimal covariant estimate-and-prepare on a qubit");
    let psi = haar_pure_state(2, &mut seeded_rng(3));
    for n in [1, 2, 4, 8, 16] {
        let est = eb_covariant_protocol(&psi, n, 1, 20_000, n as u64)?;
        println!("  n={n:>2}: {:.4} +- {:.4}  (closed form {:.4})", est.infidelity(), est.stderr, 1.0 / (n + 2) as f64);
    }
    Ok(())
}
