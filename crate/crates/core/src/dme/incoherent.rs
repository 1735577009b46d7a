//! Tomography-then-simulate baseline for density-matrix exponentiation.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::lmr::{data_unitary, dme_probes, DmeSpec};
use crate::error::{Error, Result};
use crate::numerics::random::{par_samples, DEFAULT_STREAMS};
use crate::numerics::state::trace_distance_matrices;
use crate::numerics::stats::{mean_stderr, MeanEstimate};
use crate::numerics::{linalg, CMatrix, DensityOperator, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Tomography {
    /// Each generalised Gell-Mann observable measured in its eigenbasis on
    /// an equal share of the copies.
    #[default]
    GellMann,
}

impl Tomography {
    pub fn min_copies(&self, d: usize) -> usize {
        match self {
            Tomography::GellMann => d * d,
        }
    }
}

/// Generalised Gell-Mann matrices on `C^d`, normalised `Tr(l_a l_b) = 2 delta_ab`.
pub fn gell_mann_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    let unit = |r: usize, c: usize, v: C64| {
        let mut m = CMatrix::zeros(d, d);
        m[(r, c)] = v;
        m
    };
    for j in 0..d {
        for k in j + 1..d {
            out.push(unit(j, k, C64::new(1.0, 0.0)) + unit(k, j, C64::new(1.0, 0.0)));
            out.push(unit(j, k, C64::new(0.0, -1.0)) + unit(k, j, C64::new(0.0, 1.0)));
        }
    }
    for l in 1..d {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = C64::new(scale, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * scale, 0.0);
        out.push(m);
    }
    out
}

/// Eigenvalue clipping to the nearest density operator in Frobenius norm
/// among those sharing the eigenbasis: negatives set to zero, then rescaled.
pub fn clip_to_state(h: &CMatrix) -> CMatrix {
    let (vals, vecs) = linalg::eigh(&linalg::hermitian_part(h));
    let clipped: Vec<f64> = vals.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return linalg::identity(h.nrows()) / C64::new(h.nrows() as f64, 0.0);
    }
    linalg::spectral_map(&clipped, &vecs, |x| C64::new(x / total, 0.0))
}

/// Single-copy tomography of `rho` from `n` copies; returns the clipped
/// estimate.
pub fn tomography_estimate<R: Rng + ?Sized>(
    rho: &DensityOperator,
    n: usize,
    strategy: Tomography,
    rng: &mut R,
) -> Result<CMatrix> {
    let d = rho.dim();
    if n < strategy.min_copies(d) {
        return Err(Error::InvalidParameter(format!("{n} copies are fewer than the {} required", strategy.min_copies(d))));
    }
    let basis = gell_mann_basis(d);
    let groups = basis.len();
    let mut est = linalg::identity(d) / C64::new(d as f64, 0.0);
    for (a, obs) in basis.iter().enumerate() {
        let shots = n / groups + usize::from(a < n % groups);
        let (vals, vecs) = linalg::eigh(obs);
        let mut rest = shots as u64;
        let mut rest_p = 1.0;
        let mut mean = 0.0;
        for (j, &mu) in vals.iter().enumerate() {
            let v = vecs.column(j);
            let p = (v.adjoint() * rho.matrix() * v)[(0, 0)].re.clamp(0.0, 1.0);
            let count = if j + 1 == d || rest == 0 {
                rest
            } else {
                let q = if rest_p > 0.0 { (p / rest_p).clamp(0.0, 1.0) } else { 0.0 };
                Binomial::new(rest, q).expect("probability in [0, 1]").sample(rng)
            };
            mean += mu * count as f64 / shots as f64;
            rest -= count;
            rest_p -= p;
        }
        est += obs * C64::new(0.5 * mean, 0.0);
    }
    Ok(clip_to_state(&est))
}

/// Measure the `n` copies, then apply `exp(-i rho_hat T)` to the data
/// register of `data_sigma` (which may carry a reference as its second
/// subsystem).
pub fn incoherent_dme<R: Rng + ?Sized>(
    rho: &DensityOperator,
    n: usize,
    t: f64,
    strategy: Tomography,
    data_sigma: &DensityOperator,
    rng: &mut R,
) -> Result<DensityOperator> {
    let d = rho.dim();
    let d_ref = match data_sigma.dims() {
        [x] if *x == d => 1,
        [x, r] if *x == d => *r,
        dims => return Err(Error::DimensionMismatch(format!("data register {dims:?} vs dimension {d}"))),
    };
    let rho_hat = tomography_estimate(rho, n, strategy, rng)?;
    let u = data_unitary(&rho_hat, t, d_ref)?;
    DensityOperator::new(linalg::hermitian_part(&(&u * data_sigma.matrix() * u.adjoint())), data_sigma.dims().to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncoherentError {
    /// Mean over tomography runs of the probe-maximised trace distance.
    pub error: MeanEstimate,
    pub probes: usize,
}

/// Error of the baseline against the ideal evolution, with the same probe
/// set as [`super::lmr::dme_error`], averaged over `trials` independent
/// tomography runs.
pub fn incoherent_dme_error(
    rho: &DensityOperator,
    t: f64,
    n: usize,
    probes: usize,
    trials: usize,
    seed: u64,
) -> Result<IncoherentError> {
    let spec = DmeSpec::new(t, n, rho.dim())?;
    let d = spec.d;
    let probe_set = dme_probes(d, probes, seed);
    let ideal = data_unitary(rho.matrix(), t, d)?;
    let targets: Vec<CMatrix> = probe_set.iter().map(|p| &ideal * p * ideal.adjoint()).collect();
    let runs: Vec<Result<f64>> = par_samples(trials, seed, DEFAULT_STREAMS, |rng| {
        let rho_hat = tomography_estimate(rho, n, Tomography::GellMann, rng)?;
        let u = data_unitary(&rho_hat, t, d)?;
        Ok(probe_set
            .iter()
            .zip(&targets)
            .map(|(p, target)| trace_distance_matrices(&(&u * p * u.adjoint()), target))
            .fold(0.0, f64::max))
    });
    let errs = runs.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(IncoherentError { error: mean_stderr(&errs), probes: probe_set.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{haar_unitary, seeded_rng};

    #[test]
    fn gell_mann_basis_is_orthonormal() {
        for d in 2..=4 {
            let b = gell_mann_basis(d);
            assert_eq!(b.len(), d * d - 1);
            for (i, x) in b.iter().enumerate() {
                assert!(linalg::trace(x).norm() < 1e-14);
                for (j, y) in b.iter().enumerate() {
                    let ip = linalg::trace(&(x * y)).re;
                    assert!((ip - if i == j { 2.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn clipping_returns_a_state() {
        let h = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.2, 0.0), C64::new(-0.2, 0.0)]));
        let s = clip_to_state(&h);
        assert!((s[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(DensityOperator::single(s).is_ok());
    }

    #[test]
    fn pure_qubit_example() {
        let rho = DensityOperator::basis(2, 0);
        let sigma = DensityOperator::maximally_mixed(2).mix(&DensityOperator::basis(2, 1), 0.3).unwrap();
        let mut rng = seeded_rng(1);
        let out = incoherent_dme(&rho, 10_000, 1.0, Tomography::GellMann, &sigma, &mut rng).unwrap();
        let target = super::super::lmr::ideal_dme(&sigma, &rho, 1.0).unwrap();
        assert!(trace_distance_matrices(out.matrix(), target.matrix()) < 0.1);
    }

    #[test]
    fn error_decreases_over_decades() {
        let mut rng = seeded_rng(2);
        let rho = DensityOperator::pure_single(&crate::numerics::random::haar_state_vector(2, &mut rng)).unwrap();
        let errs: Vec<f64> = [100, 1_000, 10_000, 100_000]
            .iter()
            .map(|&n| incoherent_dme_error(&rho, 1.0, n, 2, 16, 5).unwrap().error.mean)
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn error_grows_with_dimension() {
        let mut means = Vec::new();
        for d in 2..=4 {
            let mut rng = seeded_rng(3);
            let rho = DensityOperator::pure_single(&haar_unitary(d, &mut rng).column(0).into_owned()).unwrap();
            means.push(incoherent_dme_error(&rho, 1.0, 4096, 2, 16, 9).unwrap().error.mean);
        }
        assert!(means.windows(2).all(|w| w[1] > w[0]), "{means:?}");
    }

    #[test]
    fn too_few_copies() {
        let rho = DensityOperator::maximally_mixed(3);
        let mut rng = seeded_rng(0);
        assert!(tomography_estimate(&rho, 8, Tomography::GellMann, &mut rng).is_err());
    }
}
