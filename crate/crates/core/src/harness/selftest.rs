//! Fast invariant checks run by `cqi selftest`.

use serde::Serialize;

use super::config::{ExperimentConfig, Task};
use super::record::to_csv;
use super::runners::run;
use crate::cloning_rp::formulas::{f_all_bound, f_one_bound, to_f64, RpSpec};
use crate::cloning_rp::SymmetricCloner;
use crate::dme::{gamma_state, gamma_state_exp, lmr_step, ThetaPoint};
use crate::error::Result;
use crate::numerics::random::{haar_state_vector, seeded_rng};
use crate::numerics::{haar_pure_state, linalg, DensityOperator, C64};
use crate::schur::{diagrams, isotypic_projector, sector_probabilities};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match f() {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult { name, passed: false, detail: e.to_string() },
    }
}

pub fn selftest() -> Vec<CheckResult> {
    vec![
        check("cloner_matches_closed_form", || {
            let mut worst: f64 = 0.0;
            let mut rng = seeded_rng(1);
            for (n, m, d) in [(1, 2, 2), (1, 3, 2), (2, 3, 3)] {
                let spec = RpSpec::new(n, m, d, 1)?;
                let cl = SymmetricCloner::new(n, m, d)?;
                let psi = haar_state_vector(d, &mut rng);
                worst = worst.max((cl.all_site_fidelity(&psi)? - to_f64(&f_all_bound(&spec))).abs());
                for f in cl.one_site_fidelities(&psi)? {
                    worst = worst.max((f - to_f64(&f_one_bound(&spec))).abs());
                }
            }
            Ok((worst < 1e-9, format!("max deviation {worst:.2e}")))
        }),
        check("schur_projectors_resolve_identity", || {
            let (d, n) = (2usize, 4usize);
            let mut sum = linalg::identity(d.pow(n as u32)) * C64::new(-1.0, 0.0);
            let mut worst_idem: f64 = 0.0;
            for lam in diagrams(n, d) {
                let p = isotypic_projector(lam.rows(), d)?;
                let m = p.matrix.as_ref();
                worst_idem = worst_idem.max((m * m - m).camax());
                sum += m;
            }
            let dev = sum.camax().max(worst_idem);
            Ok((dev < 1e-10, format!("deviation {dev:.2e}")))
        }),
        check("sector_probabilities_normalised", || {
            let total: f64 = sector_probabilities(&[0.5, 0.3, 0.2], 5).iter().map(|x| x.1).sum();
            Ok(((total - 1.0).abs() < 1e-12, format!("sum {total}")))
        }),
        check("partial_swap_preserves_states", || {
            let mut rng = seeded_rng(2);
            let mut worst: f64 = 0.0;
            for d in 2..=3 {
                let sigma = haar_pure_state(d, &mut rng).mix(&DensityOperator::maximally_mixed(d), 0.3)?;
                let rho = haar_pure_state(d, &mut rng);
                let out = lmr_step(&sigma, &rho, 0.37)?;
                worst = worst.max((linalg::trace(out.matrix()).re - 1.0).abs());
            }
            Ok((worst < 1e-10, format!("trace deviation {worst:.2e}")))
        }),
        check("generator_closed_form", || {
            let theta = ThetaPoint::new(vec![0.2, -0.1, 0.3])?;
            let dev = (gamma_state(&theta, 1.3).matrix() - gamma_state_exp(&theta, 1.3)?.matrix()).camax();
            Ok((dev < 1e-10, format!("deviation {dev:.2e}")))
        }),
        check("config_round_trip", || {
            let cfg = ExperimentConfig::new(Task::Dme);
            let back = ExperimentConfig::from_json(&cfg.to_json()?)?;
            Ok((back == cfg, String::new()))
        }),
        check("deterministic_output", || {
            let mut cfg = ExperimentConfig::new(Task::Identity);
            cfg.grid.n = vec![1, 2];
            cfg.samples = 500;
            let a = to_csv(&run(&cfg)?.records)?;
            let b = to_csv(&run(&cfg)?.records)?;
            Ok((a == b, format!("{} bytes", a.len())))
        }),
    ]
}
