//! Measure-and-prepare approximation of one-site marginals of channels
//! into the symmetric subspace.
//!
//! Inputs live in `Sym^m(C^d)` written in the Dicke basis of
//! [`symmetric_basis`]; the output is a single site `C^d`.

use crate::error::{Error, Result};
use crate::numerics::random::{haar_state_vector, par_samples, DEFAULT_STREAMS};
use crate::numerics::{linalg, Channel, CMatrix, C64};
use crate::schur::symmetric::{symmetric_basis, symmetric_dim};

/// One-site marginal of the isometric embedding `Sym^m -> (C^d)^{(x) m}`.
pub fn symmetric_marginal_channel(d: usize, m: usize) -> Result<Channel> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let e = symmetric_basis(d, m);
    let rest = d.pow(m as u32 - 1);
    let kraus = (0..rest)
        .map(|j| CMatrix::from_fn(d, e.ncols(), |a, col| e[(a * rest + j, col)]))
        .collect();
    Channel::from_kraus(kraus)
}

/// Covariant measure-and-prepare channel on `Sym^m(C^d)`: measure with the
/// coherent-state POVM `D_m psi^{(x) m}` and prepare `psi`. Evaluated in
/// closed form as `X -> (D_m / D_{m+1}) Tr_{1..m}[(X (x) I) P_sym^{m+1}]`.
pub fn definetti_mp_channel(d: usize, m: usize) -> Result<Channel> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let e = symmetric_basis(d, m);
    let e1 = symmetric_basis(d, m + 1);
    let dm = e.ncols();
    let scale = symmetric_dim(d, m) as f64 / symmetric_dim(d, m + 1) as f64;
    let g = e1.adjoint() * linalg::kron(&e, &linalg::identity(d));
    let gram = g.adjoint() * g;
    let size = dm * d;
    let choi = CMatrix::from_fn(size, size, |r, c| {
        let (a, s) = (r / d, r % d);
        let (b, t) = (c / d, c % d);
        gram[(b * d + s, a * d + t)] * C64::new(scale, 0.0)
    });
    Channel::from_choi(&linalg::hermitian_part(&choi), dm, d)
}

/// Monte-Carlo Choi matrix of the same channel, `D_m E_psi[|phi*><phi*| (x) psi]`
/// with `phi` the Dicke coordinates of `psi^{(x) m}`.
pub fn definetti_mp_choi_mc(d: usize, m: usize, samples: usize, seed: u64) -> CMatrix {
    let e = symmetric_basis(d, m);
    let dm = e.ncols();
    let parts = par_samples(samples, seed, DEFAULT_STREAMS, |rng| {
        let psi = haar_state_vector(d, rng);
        let phi = e.adjoint() * linalg::kron_power_vec(&psi, m);
        linalg::kron(&linalg::projector(&phi.conjugate()), &linalg::projector(&psi))
    });
    let size = dm * d;
    parts.iter().fold(CMatrix::zeros(size, size), |a, b| a + b) * C64::new(dm as f64 / samples as f64, 0.0)
}

fn check_symmetric_choi(choi: &CMatrix, d: usize, m: usize) -> Result<usize> {
    let dm = symmetric_dim(d, m);
    if choi.nrows() != dm * d || choi.ncols() != dm * d {
        return Err(Error::DimensionMismatch(format!(
            "Choi of size {} is not supported on Sym^{m}(C^{d}) (x) C^{d}",
            choi.nrows()
        )));
    }
    Ok(dm)
}

/// Trace-norm distance between a one-site marginal Choi matrix and the
/// measure-and-prepare Choi matrix, without normalisation.
pub fn definetti_gap_raw(choi: &CMatrix, d: usize, m: usize) -> Result<f64> {
    check_symmetric_choi(choi, d, m)?;
    let mp = definetti_mp_channel(d, m)?;
    Ok(linalg::trace_norm_hermitian(&(choi - mp.choi())))
}

/// Trace-norm distance between the normalised Choi states
/// (`J / d_A` with `d_A = dim Sym^m`).
pub fn definetti_gap(choi: &CMatrix, d: usize, m: usize) -> Result<f64> {
    let dm = check_symmetric_choi(choi, d, m)?;
    Ok(definetti_gap_raw(choi, d, m)? / dm as f64)
}

/// `2 d_A d_B / m`.
pub fn definetti_bound(d_a: usize, d_b: usize, m: usize) -> f64 {
    2.0 * d_a as f64 * d_b as f64 / m as f64
}
