//! Framework property checks shared by the acceptance runner and the
//! property test target.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;

use cqi::framework::task::input_loss;
use cqi::framework::{
    average_risk, eb_channel, haar_pure_sampler, orbit_sampler, unitary_twirl_exact, worst_case_risk, ContinuousPovm,
    CqiTask, FinitePovm, Loss,
};
use cqi::numerics::random::{haar_unitary, random_spectrum, seeded_rng};
use cqi::numerics::{haar_pure_state, linalg, state_with_spectrum, CMatrix, Channel, DensityOperator};
use cqi::schur::{diagrams, dimension_ratio, isotypic_projector};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> cqi::Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

/// Random channel from an isometry `C^{d_in} -> C^{d_out} (x) C^{kraus}`.
pub fn random_channel(d_in: usize, d_out: usize, kraus: usize, seed: u64) -> Channel {
    let mut rng = seeded_rng(seed);
    let u = haar_unitary(d_out * kraus, &mut rng);
    let ks = (0..kraus).map(|k| CMatrix::from_fn(d_out, d_in, |a, i| u[(k * d_out + a, i)])).collect();
    Channel::from_kraus(ks).expect("isometry columns give a channel")
}

fn mix(a: &Channel, b: &Channel, w: f64) -> cqi::Result<Channel> {
    Channel::mixture(&[w, 1.0 - w], &[a.clone(), b.clone()])
}

pub fn convexity() -> Check {
    check("convexity", || {
        let task = CqiTask::identity(haar_pure_sampler(3), 3, Loss::Infidelity);
        let mut rng = seeded_rng(11);
        let candidates: Vec<DensityOperator> = (0..64).map(|_| haar_pure_state(3, &mut rng)).collect();
        let mut worst: f64 = f64::NEG_INFINITY;
        for trial in 0..8u64 {
            let a = random_channel(3, 3, 2, 100 + trial);
            let b = random_channel(3, 3, 3, 200 + trial);
            let w = 0.1 + 0.1 * trial as f64;
            let m = mix(&a, &b, w)?;
            let wc = |c: &Channel| worst_case_risk(&task, c, &candidates, 0).map(|r| r.value);
            worst = worst.max(wc(&m)? - (w * wc(&a)? + (1.0 - w) * wc(&b)?));
            let av = |c: &Channel| average_risk(&task, c, 2000, 5).map(|r| r.value);
            worst = worst.max(av(&m)? - (w * av(&a)? + (1.0 - w) * av(&b)?));
        }
        Ok((worst <= 1e-12, format!("max excess {worst:.2e}")))
    })
}

pub fn continuity() -> Check {
    check("continuity", || {
        let task = CqiTask::identity(haar_pure_sampler(2), 2, Loss::TraceDistance);
        let mut worst: f64 = f64::NEG_INFINITY;
        for trial in 0..50u64 {
            let t = random_channel(2, 2, 2, 300 + trial);
            let s = mix(&t, &random_channel(2, 2, 3, 400 + trial), 1.0 - 0.01 * (trial % 10 + 1) as f64)?;
            let rt = average_risk(&task, &t, 500, trial)?;
            let rs = average_risk(&task, &s, 500, trial)?;
            let bound = linalg::trace_norm_hermitian(&(s.choi() - t.choi()));
            let slack = 3.0 * (rt.stderr + rs.stderr);
            worst = worst.max((rs.value - rt.value).abs() - bound - slack);
        }
        Ok((worst <= 0.0, format!("max excess over bound {worst:.2e}")))
    })
}

pub fn twirl_monotonicity() -> Check {
    check("twirl_monotonicity", || {
        let task = CqiTask::identity(haar_pure_sampler(2), 2, Loss::Infidelity);
        let mut worst: f64 = f64::NEG_INFINITY;
        for trial in 0..5u64 {
            let ch = random_channel(2, 2, 2, 500 + trial);
            let tw = unitary_twirl_exact(&ch, 1, 1)?;
            let a = average_risk(&task, &ch, 20_000, 9)?;
            let b = average_risk(&task, &tw, 20_000, 9)?;
            worst = worst.max(b.value - a.value - 3.0 * (a.stderr + b.stderr));
        }
        Ok((worst <= 0.0, format!("max excess {worst:.2e}")))
    })
}

pub fn single_orbit() -> Check {
    check("single_orbit", || {
        let mut spread: f64 = 0.0;
        for (d, seed) in [(2usize, 1u64), (3, 2)] {
            let mut rng = seeded_rng(seed);
            let sigma0 = state_with_spectrum(&random_spectrum(d, &mut rng), &haar_unitary(d, &mut rng))?;
            let task = CqiTask::identity(orbit_sampler(sigma0), d, Loss::Infidelity);
            let cov = unitary_twirl_exact(&random_channel(d, d, 2, 600 + seed), 1, 1)?;
            let losses: Vec<f64> = (0..20)
                .map(|_| {
                    let sigma = (task.sampler)(&mut rng);
                    input_loss(&task, &cov, &sigma, &mut rng)
                })
                .collect::<cqi::Result<_>>()?;
            let (lo, hi) = losses.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
            spread = spread.max(hi - lo);
        }
        Ok((spread <= 1e-9, format!("max loss spread {spread:.2e}")))
    })
}

/// Occupation numbers of a computational basis index of `(C^d)^{(x) sites}`.
fn type_of(mut idx: usize, d: usize, sites: usize) -> Vec<i64> {
    let mut t = vec![0i64; d];
    for _ in 0..sites {
        t[idx % d] += 1;
        idx /= d;
    }
    t
}

pub fn block_diagonality() -> Check {
    check("block_diagonality", || {
        let mut worst: f64 = 0.0;
        for d in [2usize, 3] {
            let tw = unitary_twirl_exact(&random_channel(d, d * d, 2, 700 + d as u64), 1, 2)?;
            for i in 0..d {
                for j in 0..d {
                    let out = tw.apply_matrix(&linalg::outer(&linalg::basis_ket(d, i), &linalg::basis_ket(d, j)))?;
                    let mut shift = vec![0i64; d];
                    shift[i] += 1;
                    shift[j] -= 1;
                    for y in 0..d * d {
                        for z in 0..d * d {
                            let ty = type_of(y, d, 2);
                            let tz = type_of(z, d, 2);
                            let diff: Vec<i64> = ty.iter().zip(&tz).map(|(a, b)| a - b).collect();
                            if diff != shift {
                                worst = worst.max(out[(y, z)].norm());
                            }
                        }
                    }
                }
            }
        }
        Ok((worst <= 1e-9, format!("max off-block entry {worst:.2e}")))
    })
}

pub fn povm_completeness() -> Check {
    check("povm_completeness", || {
        let d = 3;
        let comp = FinitePovm::computational(d);
        let sum = comp.effects().iter().fold(CMatrix::zeros(d, d), |a, b| a + b);
        let exact = (sum - linalg::identity(d)).camax();
        let prep: Vec<DensityOperator> = (0..d).map(|i| DensityOperator::basis(d, i)).collect();
        let tp = eb_channel(&comp, &prep)?.trace_preservation_defect();
        let fid = linalg::projector(&linalg::basis_ket(d, 0));
        let mc = ContinuousPovm::covariant(d, 1, fid, d as f64).completeness_defect(100_000, 3);
        Ok((
            exact < 1e-14 && tp < 1e-12 && mc < 2e-2,
            format!("finite {exact:.1e}, channel {tp:.1e}, covariant MC {mc:.1e}"),
        ))
    })
}

pub fn schur_projectors() -> Check {
    check("schur_projectors", || {
        let mut worst: f64 = 0.0;
        let mut rank_ok = true;
        for d in 2..=3usize {
            for n in 1..=4usize {
                let dim = d.pow(n as u32);
                let ps: Vec<(Vec<usize>, CMatrix)> = diagrams(n, d)
                    .into_iter()
                    .map(|y| Ok((y.rows().to_vec(), isotypic_projector(y.rows(), d)?.matrix.as_ref().clone())))
                    .collect::<cqi::Result<_>>()?;
                let mut sum = -linalg::identity(dim);
                for (a, (rows, p)) in ps.iter().enumerate() {
                    sum += p;
                    worst = worst.max((p * p - p).camax());
                    let expect = cqi::schur::weyl_dim(rows, d) * cqi::schur::sn_dim(rows);
                    let rank = linalg::trace(p).re.round() as u64;
                    rank_ok &= BigInt::from(rank) == BigInt::from(expect);
                    for (_, q) in &ps[a + 1..] {
                        worst = worst.max((p * q).camax());
                    }
                }
                worst = worst.max(sum.camax());
            }
        }
        Ok((worst < 1e-10 && rank_ok, format!("max defect {worst:.2e}, ranks {}", if rank_ok { "ok" } else { "wrong" })))
    })
}

pub fn dimension_ratio_exact() -> Check {
    check("dimension_ratio_exact", || {
        let mut cases = 0;
        for d in 2..=4 {
            for n in 0..=6 {
                for y in diagrams(n, d) {
                    for k in 1..=d {
                        let alpha = y.delete_row(k - 1)?;
                        let q = BigRational::new(BigInt::from(y.weyl_dim()), BigInt::from(alpha.weyl_dim()));
                        if dimension_ratio(&y, k)? != q {
                            return Ok((false, format!("mismatch at {y} k={k}")));
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok((true, format!("{cases} cases exact")))
    })
}

pub fn all_checks() -> Vec<Check> {
    vec![
        convexity(),
        continuity(),
        twirl_monotonicity(),
        single_orbit(),
        block_diagonality(),
        povm_completeness(),
        schur_projectors(),
        dimension_ratio_exact(),
    ]
}
