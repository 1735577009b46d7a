use crate::error::{Error, Result};
use crate::numerics::random::{haar_unitary, par_samples, DEFAULT_STREAMS};
use crate::numerics::state::fidelity_matrices;
use crate::numerics::{linalg, CMatrix, CVector, DensityOperator, C64};
use crate::schur::symmetric::symmetric_basis;
use crate::schur::twirl::commutant_twirl;

use super::cloner::{SymmetricCloner, MAX_CLONER_DIM};
use super::formulas::RpSpec;

/// Largest copy number for the exact environment twirl.
pub const MAX_EXACT_RP_COPIES: usize = 4;
/// Largest environment dimension for the exact environment twirl.
pub const MAX_EXACT_RP_RANK: usize = 2;

/// `sum_i sqrt(p_i) |e_i> (x) |i>` over the `r` leading eigenpairs of `rho`,
/// ordered system first.
pub fn purification(rho: &DensityOperator, r: usize) -> Result<CVector> {
    let d = rho.dim();
    if r == 0 || r > d {
        return Err(Error::InvalidParameter(format!("rank {r} outside 1..={d}")));
    }
    let (vals, vecs) = linalg::eigh(rho.matrix());
    let tail: f64 = vals[r..].iter().sum();
    if tail > 1e-9 {
        return Err(Error::InvalidParameter(format!("state has weight {tail:.3e} beyond rank {r}")));
    }
    let mut psi = CVector::zeros(d * r);
    for (i, &p) in vals.iter().take(r).enumerate() {
        let e: CVector = vecs.column(i).into_owned();
        psi += linalg::kron_vec(&e, &linalg::basis_ket(r, i)) * C64::new(p.max(0.0).sqrt(), 0.0);
    }
    let norm = psi.norm();
    Ok(psi / C64::new(norm, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwirlMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

fn rp_dims(d: usize, r: usize, n: usize) -> Vec<usize> {
    std::iter::repeat_n([d, r], n).flatten().collect()
}

/// Exact Haar average over environment unitaries of `((I (x) U) psi0)^{(x) n}`.
pub fn rp_twirl_exact(psi0: &CVector, d: usize, r: usize, n: usize) -> Result<DensityOperator> {
    if n > MAX_EXACT_RP_COPIES || r > MAX_EXACT_RP_RANK {
        return Err(Error::SizeLimit(format!(
            "exact environment twirl supports n <= {MAX_EXACT_RP_COPIES}, r <= {MAX_EXACT_RP_RANK}"
        )));
    }
    if psi0.len() != d * r {
        return Err(Error::DimensionMismatch("purification length".into()));
    }
    let x = linalg::projector(&linalg::kron_power_vec(psi0, n));
    let dims = rp_dims(d, r, n);
    let env: Vec<usize> = (0..n).map(|k| 2 * k + 1).collect();
    let tw = commutant_twirl(&x, &dims, &env)?;
    DensityOperator::from_unnormalized(tw, dims)
}

/// Monte-Carlo version of [`rp_twirl_exact`].
pub fn rp_twirl_mc(psi0: &CVector, d: usize, r: usize, n: usize, samples: usize, seed: u64) -> Result<DensityOperator> {
    if psi0.len() != d * r {
        return Err(Error::DimensionMismatch("purification length".into()));
    }
    let total = (d * r).pow(n as u32);
    if total > MAX_CLONER_DIM {
        return Err(Error::SizeLimit(format!("(dr)^n = {total}")));
    }
    let parts = par_samples(samples, seed, DEFAULT_STREAMS, |rng| {
        let u = haar_unitary(r, rng);
        let v = linalg::kron(&linalg::identity(d), &u) * psi0;
        linalg::projector(&linalg::kron_power_vec(&v, n))
    });
    let mean = parts.iter().fold(CMatrix::zeros(total, total), |a, b| a + b) / C64::new(samples as f64, 0.0);
    DensityOperator::from_unnormalized(mean, rp_dims(d, r, n))
}

fn rp_twirl(psi0: &CVector, d: usize, r: usize, n: usize, mode: TwirlMode) -> Result<DensityOperator> {
    match mode {
        TwirlMode::Exact => rp_twirl_exact(psi0, d, r, n),
        TwirlMode::MonteCarlo { samples, seed } => rp_twirl_mc(psi0, d, r, n, samples, seed),
    }
}

/// Purify-and-clone: environment-twirled purification of the `n` inputs,
/// followed by discarding copies (`m <= n`) or optimal cloning over
/// `C^{dr}` (`m > n`).
#[derive(Debug, Clone)]
pub struct PurifyAndClone {
    pub spec: RpSpec,
    cloner: Option<SymmetricCloner>,
}

/// Fidelities of one purify-and-clone run.
#[derive(Debug, Clone, PartialEq)]
pub struct PurifyAndCloneReport {
    /// `F(rho^{(x) m}, Tr_env out)`.
    pub all_site_system: f64,
    /// `F(RP target on m copies, out)`.
    pub all_site_purified: f64,
    /// `F(rho, site marginal)` for each site.
    pub one_site_system: Vec<f64>,
    /// `F(RP target on one copy, purified site marginal)` for each site.
    pub one_site_purified: Vec<f64>,
}

impl PurifyAndClone {
    pub fn new(spec: RpSpec) -> Result<Self> {
        let dr = spec.pur_dim();
        if dr.checked_pow(spec.m as u32).is_none_or(|x| x > MAX_CLONER_DIM) {
            return Err(Error::SizeLimit(format!("(dr)^m = {dr}^{} exceeds {MAX_CLONER_DIM}", spec.m)));
        }
        let cloner = if spec.m > spec.n { Some(SymmetricCloner::new(spec.n, spec.m, dr)?) } else { None };
        Ok(Self { spec, cloner })
    }

    /// Output on `rho^{(x) n}` as a state on `(C^d (x) C^r)^{(x) m}`.
    pub fn output(&self, rho: &DensityOperator, mode: TwirlMode) -> Result<DensityOperator> {
        let RpSpec { n, m, d, r } = self.spec;
        if rho.dim() != d {
            return Err(Error::DimensionMismatch("input dimension".into()));
        }
        let psi0 = purification(rho, r)?;
        let twirled = rp_twirl(&psi0, d, r, n, mode)?;
        let dims = rp_dims(d, r, m);
        match &self.cloner {
            None => {
                let keep: Vec<usize> = (0..2 * m).collect();
                twirled.partial_trace(&keep)?.with_dims(dims)
            }
            Some(cl) => {
                let e_n = cl.input_basis();
                let x_sym = e_n.adjoint() * twirled.matrix() * e_n;
                let out_sym = cl.apply_sym(&x_sym)?;
                let e_m = cl.output_basis();
                DensityOperator::from_unnormalized(e_m * out_sym * e_m.adjoint(), dims)
            }
        }
    }

    pub fn report(&self, rho: &DensityOperator, mode: TwirlMode) -> Result<PurifyAndCloneReport> {
        let RpSpec { m, d, r, .. } = self.spec;
        let out = self.output(rho, mode)?;
        let sys: Vec<usize> = (0..m).map(|k| 2 * k).collect();
        let sys_state = out.partial_trace(&sys)?;
        let all_site_system = fidelity_matrices(rho.tensor_power(m).matrix(), sys_state.matrix());
        let psi0 = purification(rho, r)?;
        let target_m = match mode {
            TwirlMode::Exact if m <= MAX_EXACT_RP_COPIES => rp_twirl_exact(&psi0, d, r, m)?,
            TwirlMode::Exact => rp_twirl_mc(&psi0, d, r, m, 20_000, 0)?,
            TwirlMode::MonteCarlo { samples, seed } => rp_twirl_mc(&psi0, d, r, m, samples, seed ^ 0x5eed)?,
        };
        let all_site_purified = fidelity_matrices(target_m.matrix(), out.matrix());
        let target_1 = rp_twirl(&psi0, d, r, 1, TwirlMode::Exact)?;
        let mut one_site_system = Vec::with_capacity(m);
        let mut one_site_purified = Vec::with_capacity(m);
        for k in 0..m {
            let pur = out.partial_trace(&[2 * k, 2 * k + 1])?;
            one_site_purified.push(fidelity_matrices(target_1.matrix(), pur.matrix()));
            let s = out.partial_trace(&[2 * k])?;
            one_site_system.push(fidelity_matrices(rho.matrix(), s.matrix()));
        }
        Ok(PurifyAndCloneReport { all_site_system, all_site_purified, one_site_system, one_site_purified })
    }
}

/// Dicke coordinates of a symmetric state on `(C^dim)^{(x) n}`.
pub fn to_symmetric_coordinates(x: &CMatrix, dim: usize, n: usize) -> CMatrix {
    let e = symmetric_basis(dim, n);
    e.adjoint() * x * e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning_rp::formulas::{f_all_bound, f_one_bound, to_f64};
    use crate::numerics::random::seeded_rng;
    use crate::numerics::state_with_spectrum;

    fn qubit_state(p: f64, seed: u64) -> DensityOperator {
        let mut rng = seeded_rng(seed);
        state_with_spectrum(&[p, 1.0 - p], &haar_unitary(2, &mut rng)).unwrap()
    }

    #[test]
    fn rank_one_twirl_is_trivial() {
        let mut rng = seeded_rng(1);
        let psi = crate::numerics::random::haar_state_vector(2, &mut rng);
        let rho = DensityOperator::pure_single(&psi).unwrap();
        let p0 = purification(&rho, 1).unwrap();
        let tw = rp_twirl_exact(&p0, 2, 1, 3).unwrap();
        let expect = linalg::projector(&linalg::kron_power_vec(&p0, 3));
        assert!((tw.matrix() - expect).camax() < 1e-12);
    }

    #[test]
    fn system_marginals_are_the_input() {
        let rho = qubit_state(0.7, 2);
        let p0 = purification(&rho, 2).unwrap();
        let tw = rp_twirl_exact(&p0, 2, 2, 3).unwrap();
        for k in 0..3 {
            let marg = tw.partial_trace(&[2 * k]).unwrap();
            assert!((marg.matrix() - rho.matrix()).camax() < 1e-9);
        }
        let sys = tw.partial_trace(&[0, 2, 4]).unwrap();
        assert!((sys.matrix() - rho.tensor_power(3).matrix()).camax() < 1e-9);
    }

    #[test]
    fn exact_twirl_agrees_with_sampling() {
        let rho = qubit_state(0.65, 3);
        let p0 = purification(&rho, 2).unwrap();
        let exact = rp_twirl_exact(&p0, 2, 2, 2).unwrap();
        let mc = rp_twirl_mc(&p0, 2, 2, 2, 100_000, 7).unwrap();
        assert!((exact.matrix() - mc.matrix()).camax() < 3e-3);
    }

    #[test]
    fn exact_twirl_size_limits() {
        let p0 = purification(&DensityOperator::maximally_mixed(3), 3).unwrap();
        assert!(matches!(rp_twirl_exact(&p0, 3, 3, 2), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn m_equals_n_returns_twirl() {
        let rho = qubit_state(0.8, 4);
        let pc = PurifyAndClone::new(RpSpec::new(2, 2, 2, 2).unwrap()).unwrap();
        let out = pc.output(&rho, TwirlMode::Exact).unwrap();
        let p0 = purification(&rho, 2).unwrap();
        let tw = rp_twirl_exact(&p0, 2, 2, 2).unwrap();
        assert!((out.matrix() - tw.matrix()).camax() < 1e-12);
    }

    #[test]
    fn purify_and_clone_meets_bounds() {
        let spec = RpSpec::new(1, 2, 2, 2).unwrap();
        let pc = PurifyAndClone::new(spec).unwrap();
        for seed in 0..4 {
            let rho = qubit_state(0.6 + 0.1 * seed as f64, seed);
            let rep = pc.report(&rho, TwirlMode::Exact).unwrap();
            let f_one = to_f64(&f_one_bound(&spec));
            let f_all = to_f64(&f_all_bound(&spec));
            for (s, p) in rep.one_site_system.iter().zip(&rep.one_site_purified) {
                assert!(*s >= f_one - 1e-9, "{rep:?}");
                assert!(*s >= *p - 1e-9);
                assert!(*p >= f_one - 1e-9);
            }
            let spread = rep.one_site_system.iter().cloned().fold(f64::NAN, f64::max)
                - rep.one_site_system.iter().cloned().fold(f64::NAN, f64::min);
            assert!(spread < 1e-9);
            assert!(rep.all_site_purified >= f_all - 1e-9);
            assert!(rep.all_site_system >= rep.all_site_purified - 1e-7, "{rep:?}");
        }
    }

    #[test]
    fn discarding_copies_when_m_below_n() {
        let spec = RpSpec::new(3, 2, 2, 2).unwrap();
        let pc = PurifyAndClone::new(spec).unwrap();
        let rho = qubit_state(0.75, 9);
        let rep = pc.report(&rho, TwirlMode::Exact).unwrap();
        assert!((rep.all_site_system - 1.0).abs() < 1e-9);
        assert!((rep.all_site_purified - 1.0).abs() < 1e-9);
    }
}
