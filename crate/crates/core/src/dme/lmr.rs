//! Partial-swap density-matrix exponentiation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::random::{haar_state_vector, stream_rng};
use crate::numerics::state::trace_distance_matrices;
use crate::numerics::{channel::maximally_entangled_unnormalized, linalg, CMatrix, DensityOperator, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DmeSpec {
    /// Simulation time.
    pub t: f64,
    /// Copies of `rho`, one per step.
    pub n: usize,
    pub d: usize,
}

impl DmeSpec {
    pub fn new(t: f64, n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("need n, d >= 1 and finite T, got n={n} d={d} T={t}")));
        }
        Ok(Self { t, n, d })
    }

    pub fn delta(&self) -> f64 {
        self.t / self.n as f64
    }

    /// `T = 0 mod 2 pi`: the target acts trivially on the family used by
    /// the lower bound, which then says nothing.
    pub fn vacuous(&self) -> bool {
        is_multiple_of_two_pi(self.t)
    }
}

pub(crate) fn is_multiple_of_two_pi(t: f64) -> bool {
    (t / 2.0).sin().abs() < 1e-9
}

fn split_dims(sigma: &DensityOperator, d: usize) -> Result<usize> {
    match sigma.dims() {
        [x] if *x == d => Ok(1),
        [x, r] if *x == d => Ok(*r),
        dims => Err(Error::DimensionMismatch(format!("data register {dims:?} does not start with dimension {d}"))),
    }
}

/// One step on raw matrices: `sigma` lives on data (x) reference with the
/// reference of dimension `d_ref`.
///
/// `Tr_A[e^{-i S delta} (sigma (x) rho_A) e^{i S delta}]
///   = c^2 sigma + s^2 rho (x) sigma_R - i s c [rho (x) I, sigma]`.
pub(crate) fn lmr_step_matrix(sigma: &CMatrix, rho: &CMatrix, d_ref: usize, delta: f64) -> CMatrix {
    let (s, c) = delta.sin_cos();
    let d = rho.nrows();
    let (rho_i, swapped) = if d_ref == 1 {
        (rho.clone(), rho.clone())
    } else {
        let sigma_r = linalg::partial_trace(sigma, &[d, d_ref], &[1]).expect("dims checked by caller");
        (linalg::kron(rho, &linalg::identity(d_ref)), linalg::kron(rho, &sigma_r))
    };
    let comm = &rho_i * sigma - sigma * &rho_i;
    sigma * C64::new(c * c, 0.0) + swapped * C64::new(s * s, 0.0) - comm * C64::new(0.0, s * c)
}

/// `Tr_2[e^{-i S delta} (sigma (x) rho) e^{i S delta}]`, with `S` swapping
/// the data register of `sigma` and the copy of `rho`. `sigma` may carry a
/// reference register as its second subsystem.
pub fn lmr_step(sigma: &DensityOperator, rho: &DensityOperator, delta: f64) -> Result<DensityOperator> {
    let d = rho.dim();
    let d_ref = split_dims(sigma, d)?;
    let out = lmr_step_matrix(sigma.matrix(), rho.matrix(), d_ref, delta);
    DensityOperator::new(linalg::hermitian_part(&out), sigma.dims().to_vec())
}

/// `n` steps of size `T / n`.
pub fn lmr_protocol(sigma: &DensityOperator, rho: &DensityOperator, t: f64, n: usize) -> Result<DensityOperator> {
    let spec = DmeSpec::new(t, n, rho.dim())?;
    let d_ref = split_dims(sigma, spec.d)?;
    let out = lmr_matrix(sigma.matrix(), rho.matrix(), d_ref, &spec);
    DensityOperator::new(linalg::hermitian_part(&out), sigma.dims().to_vec())
}

fn lmr_matrix(sigma: &CMatrix, rho: &CMatrix, d_ref: usize, spec: &DmeSpec) -> CMatrix {
    let delta = spec.delta();
    let mut x = sigma.clone();
    for _ in 0..spec.n {
        x = lmr_step_matrix(&x, rho, d_ref, delta);
    }
    x
}

/// `(U (x) I) sigma (U (x) I)^dagger` with `U = exp(-i rho T)` on the data.
pub fn ideal_dme(sigma: &DensityOperator, rho: &DensityOperator, t: f64) -> Result<DensityOperator> {
    let d_ref = split_dims(sigma, rho.dim())?;
    let u = data_unitary(rho.matrix(), t, d_ref)?;
    DensityOperator::new(linalg::hermitian_part(&(&u * sigma.matrix() * u.adjoint())), sigma.dims().to_vec())
}

pub(crate) fn data_unitary(rho: &CMatrix, t: f64, d_ref: usize) -> Result<CMatrix> {
    let u = linalg::herm_exp(rho, t)?;
    Ok(if d_ref == 1 { u } else { linalg::kron(&u, &linalg::identity(d_ref)) })
}

/// Probe inputs on data (x) reference (`d` each): the maximally entangled
/// state followed by `count` Haar-random pure states.
pub fn dme_probes(d: usize, count: usize, seed: u64) -> Vec<CMatrix> {
    let phi = maximally_entangled_unnormalized(d) / C64::new((d as f64).sqrt(), 0.0);
    let mut out = vec![linalg::projector(&phi)];
    let mut rng = stream_rng(seed, 0);
    for _ in 0..count {
        out.push(linalg::projector(&haar_state_vector(d * d, &mut rng)));
    }
    out
}

/// Largest trace distance between the LMR output and the ideal evolution
/// over entangled probes. This lower-bounds half the diamond distance
/// between the two channels.
pub fn dme_error(rho: &DensityOperator, t: f64, n: usize, probes: usize, seed: u64) -> Result<f64> {
    let spec = DmeSpec::new(t, n, rho.dim())?;
    let d = spec.d;
    let u = data_unitary(rho.matrix(), t, d)?;
    let errs: Vec<f64> = dme_probes(d, probes, seed)
        .into_par_iter()
        .map(|p| {
            let out = lmr_matrix(&p, rho.matrix(), d, &spec);
            trace_distance_matrices(&out, &(&u * &p * u.adjoint()))
        })
        .collect();
    Ok(errs.into_iter().fold(0.0, f64::max))
}
