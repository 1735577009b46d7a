use crate::error::{Error, Result};
use crate::numerics::random::{haar_unitary, par_samples, DEFAULT_STREAMS};
use crate::numerics::{linalg, Channel, CMatrix, C64};
use crate::schur::partitions::permutations;
use crate::schur::projectors::permutation_operator;
use crate::schur::twirl::commutant_twirl;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    In,
    Out,
}

/// Local dimension `d` with `d^copies = total`.
pub fn local_dim(total: usize, copies: usize) -> Result<usize> {
    if copies == 0 {
        return Err(Error::InvalidParameter("zero copies".into()));
    }
    let d = (total as f64).powf(1.0 / copies as f64).round() as usize;
    if d.checked_pow(copies as u32) != Some(total) {
        return Err(Error::DimensionMismatch(format!("{total} is not a {copies}-fold power")));
    }
    Ok(d)
}

/// Compose with the uniform average over permutations of the identical
/// registers on one side.
pub fn exchange_twirl(proto: &Channel, side: Side, copies: usize) -> Result<Channel> {
    let total = match side {
        Side::In => proto.d_in(),
        Side::Out => proto.d_out(),
    };
    let d = local_dim(total, copies)?;
    if copies == 1 {
        return Ok(proto.clone());
    }
    let perms = permutations(copies);
    let w = C64::new(1.0 / (perms.len() as f64).sqrt(), 0.0);
    let mut kraus = Vec::with_capacity(perms.len() * proto.kraus().len());
    for p in &perms {
        let u = permutation_operator(p, d) * w;
        for k in proto.kraus() {
            kraus.push(match side {
                Side::In => k * &u,
                Side::Out => &u * k,
            });
        }
    }
    Ok(Channel::from_kraus_unchecked(kraus)?.compress())
}

fn twirl_dims(proto: &Channel, n: usize, m: usize) -> Result<usize> {
    let d = local_dim(proto.d_in(), n)?;
    if local_dim(proto.d_out(), m)? != d {
        return Err(Error::DimensionMismatch("input and output sites differ in dimension".into()));
    }
    Ok(d)
}

/// Exact unitary twirl `E_U U^{(x)m dagger} T(U^{(x)n} . U^{(x)n dagger}) U^{(x)m}`
/// via the commutant projection of the input-transposed Choi matrix.
/// Requires `n + m` within the permutation limit.
pub fn unitary_twirl_exact(proto: &Channel, n: usize, m: usize) -> Result<Channel> {
    let d = twirl_dims(proto, n, m)?;
    let dims = vec![d; n + m];
    let ins: Vec<usize> = (0..n).collect();
    let all: Vec<usize> = (0..n + m).collect();
    let pt = linalg::partial_transpose(proto.choi(), &dims, &ins)?;
    let tw = commutant_twirl(&pt, &dims, &all)?;
    let choi = linalg::partial_transpose(&tw, &dims, &ins)?;
    Channel::from_choi(&linalg::hermitian_part(&choi), proto.d_in(), proto.d_out())
}

/// Monte-Carlo unitary twirl from `samples` Haar draws.
pub fn unitary_twirl_mc(proto: &Channel, n: usize, m: usize, samples: usize, seed: u64) -> Result<Channel> {
    let d = twirl_dims(proto, n, m)?;
    let choi = proto.choi();
    let parts = par_samples(samples, seed, DEFAULT_STREAMS, |rng| {
        let a = haar_unitary(d, rng);
        let big = linalg::kron(&linalg::kron_power(&a.conjugate(), n), &linalg::kron_power(&a, m));
        &big * choi * big.adjoint()
    });
    let size = choi.nrows();
    let mean = parts.iter().fold(CMatrix::zeros(size, size), |acc, x| acc + x) / C64::new(samples as f64, 0.0);
    Channel::from_choi(&linalg::hermitian_part(&mean), proto.d_in(), proto.d_out())
}

/// Largest deviation from covariance over a few Haar unitaries:
/// `max |T(U X U^dagger) - U T(X) U^dagger|` on basis operators `X`.
pub fn covariance_defect(proto: &Channel, n: usize, m: usize, trials: usize, seed: u64) -> Result<f64> {
    let d = twirl_dims(proto, n, m)?;
    let mut rng = crate::numerics::random::seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let u = haar_unitary(d, &mut rng);
        let ui = linalg::kron_power(&u, n);
        let uo = linalg::kron_power(&u, m);
        for i in 0..proto.d_in() {
            let x = linalg::projector(&linalg::basis_ket(proto.d_in(), i));
            let lhs = proto.apply_matrix(&(&ui * &x * ui.adjoint()))?;
            let rhs = &uo * proto.apply_matrix(&x)? * uo.adjoint();
            worst = worst.max((lhs - rhs).camax());
        }
    }
    Ok(worst)
}
