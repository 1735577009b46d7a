//! Density-matrix exponentiation: partial-swap steps against the
//! tomography baseline, plus the lower bound for measure-first protocols.
//!
//! cargo run --release --example dme

use std::f64::consts::PI;

use cqi::dme::{compute_r0, dme_error, incoherent_dme_error, incoherent_lower_bound};
use cqi::numerics::haar_pure_state;
use cqi::numerics::random::seeded_rng;

fn main() -> cqi::Result<()> {
    let t = 1.0;
    println!("partial-swap error ratios, T = {t}");
    for d in [2, 3] {
        let rho = haar_pure_state(d, &mut seeded_rng(d as u64));
        let errs: Vec<f64> =
            [16, 32, 64, 128].iter().map(|&n| dme_error(&rho, t, n, 8, 1)).collect::<cqi::Result<_>>()?;
        let shown: Vec<String> = errs.iter().map(|e| format!("{e:.4e}")).collect();
        let ratios: Vec<String> = errs.windows(2).map(|w| format!("{:.3}", w[1] / w[0])).collect();
        println!("  d={d}: errors {} ratios {}", shown.join(" "), ratios.join(" "));
    }

    println!("\nn = 4096, T = {t}");
    println!("{:>3} {:>12} {:>12}", "d", "swap", "tomography");
    for d in 2..=4 {
        let rho = haar_pure_state(d, &mut seeded_rng(10 + d as u64));
        let coherent = dme_error(&rho, t, 4096, 4, 1)?;
        let incoherent = incoherent_dme_error(&rho, t, 4096, 4, 16, 2)?;
        println!("{d:>3} {coherent:>12.4e} {:>12.4e}", incoherent.error.mean);
    }

    println!("\ncrossover at d = 3");
    let rho = haar_pure_state(3, &mut seeded_rng(13));
    for n in [16, 32, 64, 128, 256, 512, 1024] {
        let coherent = dme_error(&rho, t, n, 4, 1)?;
        let incoherent = incoherent_dme_error(&rho, t, n, 4, 16, 2)?;
        println!("  n={n:>5}: swap {coherent:.4e}  tomography {:.4e}", incoherent.error.mean);
    }

    println!("\nlower bound for measure-first protocols");
    for t in [1.0, PI / 2.0, PI] {
        let r0 = compute_r0(t)?;
        let b = incoherent_lower_bound(1e-7, 4, t)?;
        println!("  T={t:.3}: r0={r0:.3}  n >= {:.1} (d=4, eps=1e-7, valid={})", b.value, b.valid);
    }
    Ok(())
}
