//! Purity amplification sample-complexity bounds: the coherent upper bound
//! is flat in the dimension, the measure-and-prepare lower bound grows
//! linearly in it.
//!
//! cargo run --release --example qpa_bounds

use cqi::qpa::{
    adjacent_gap_upper, coherent_sample_upper, eb_sample_lower, nearest_state_estimator, one_gap_upper,
    separation_crossover, PureFamily,
};
use cqi::numerics::random::{haar_unitary, seeded_rng};
use cqi::numerics::state_with_spectrum;

fn main() -> cqi::Result<()> {
    println!("one-gap bound at m=1, eps=1, D=1: {}", one_gap_upper(1, 1.0, 1.0)?);
    println!("interior adjacent-gap bound at m=1, eps=1, D=1, k=2, d=3: {}", adjacent_gap_upper(1, 1.0, 1.0, 2, 3)?);

    let (eps, d_min) = (0.01, 0.3);
    let coherent = coherent_sample_upper(1, eps, d_min)?;
    println!(
        "\ncoherent upper bound at eps={eps}, D={d_min}: {:.1} (S = {:.1}, S0 = {:.1})",
        coherent.value, coherent.constants["S"], coherent.constants["S0"]
    );
    println!("{:>6} {:>12}", "d", "m&p lower");
    for d in [2, 10, 100, 1000, 3000, 5000] {
        println!("{d:>6} {:>12.1}", eb_sample_lower(eps, d, 1)?.value);
    }
    match separation_crossover(eps, 1, d_min, 1)? {
        Some(d) => println!("measure-and-prepare needs more copies from d = {d}"),
        None => println!("no crossover"),
    }

    let rho = state_with_spectrum(&[0.85, 0.15], &haar_unitary(2, &mut seeded_rng(8)))?;
    let near = nearest_state_estimator(rho.matrix(), &PureFamily::all_pure_states(2))?;
    println!(
        "\nnearest pure state to a (0.85, 0.15) qubit: trace distance {:.4} (converged {})",
        near.distance, near.converged
    );
    Ok(())
}
