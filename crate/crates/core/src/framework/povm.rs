use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::random::{haar_unitary, par_samples, SimRng, DEFAULT_STREAMS};
use crate::numerics::{linalg, Channel, CMatrix, DensityOperator, C64, CHANNEL_TOL};

/// Finite POVM with validated completeness.
#[derive(Debug, Clone)]
pub struct FinitePovm {
    effects: Vec<CMatrix>,
}

impl FinitePovm {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self> {
        let first = effects.first().ok_or_else(|| Error::InvalidParameter("empty POVM".into()))?;
        let d = first.nrows();
        let mut sum = CMatrix::zeros(d, d);
        for e in &effects {
            if e.shape() != (d, d) {
                return Err(Error::DimensionMismatch("POVM effects differ in shape".into()));
            }
            let min = linalg::eigvalsh(e).last().copied().unwrap_or(0.0);
            if min < -CHANNEL_TOL {
                return Err(Error::NotPositive(min));
            }
            sum += e;
        }
        let defect = (sum - linalg::identity(d)).camax();
        if defect > CHANNEL_TOL {
            return Err(Error::IncompletePovm(defect));
        }
        Ok(Self { effects })
    }

    pub fn computational(d: usize) -> Self {
        Self::new((0..d).map(|i| linalg::projector(&linalg::basis_ket(d, i))).collect()).expect("complete")
    }

    pub fn trivial(d: usize) -> Self {
        Self::new(vec![linalg::identity(d)]).expect("complete")
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub fn probabilities(&self, rho: &CMatrix) -> Vec<f64> {
        self.effects.iter().map(|e| (e * rho).trace().re.max(0.0)).collect()
    }
}

pub type UnitarySampler = Arc<dyn Fn(&mut SimRng) -> CMatrix + Send + Sync>;
pub type EffectFn = Arc<dyn Fn(&CMatrix) -> CMatrix + Send + Sync>;

/// POVM indexed by unitaries: effect density `M(U)` integrated against the
/// sampler's distribution.
#[derive(Clone)]
pub struct ContinuousPovm {
    pub dim: usize,
    pub sampler: UnitarySampler,
    pub effect: EffectFn,
}

impl ContinuousPovm {
    /// Covariant POVM `M(U) = c U F U^dagger` over Haar-random `U` acting as
    /// `U^{(x) copies}`.
    pub fn covariant(d: usize, copies: usize, fiducial: CMatrix, scale: f64) -> Self {
        let dim = d.pow(copies as u32);
        Self {
            dim,
            sampler: Arc::new(move |rng| haar_unitary(d, rng)),
            effect: Arc::new(move |u| {
                let big = linalg::kron_power(u, copies);
                &big * &fiducial * big.adjoint() * C64::new(scale, 0.0)
            }),
        }
    }

    /// Max-entry deviation of the Monte-Carlo average of `M(U)` from `I`.
    pub fn completeness_defect(&self, samples: usize, seed: u64) -> f64 {
        let parts = par_samples(samples, seed, DEFAULT_STREAMS, |rng| {
            let u = (self.sampler)(rng);
            (self.effect)(&u)
        });
        let mean = parts.iter().fold(CMatrix::zeros(self.dim, self.dim), |a, b| a + b)
            / C64::new(samples as f64, 0.0);
        (mean - linalg::identity(self.dim)).camax()
    }
}

/// Measure-and-prepare channel `X -> sum_i Tr(M_i X) sigma_i` in a product
/// Kraus form, so the Choi matrix is separable by construction.
pub fn eb_channel(povm: &FinitePovm, prep: &[DensityOperator]) -> Result<Channel> {
    if prep.len() != povm.effects.len() {
        return Err(Error::DimensionMismatch("one preparation per outcome is required".into()));
    }
    let d_out = prep[0].dim();
    if prep.iter().any(|s| s.dim() != d_out) {
        return Err(Error::DimensionMismatch("preparations differ in dimension".into()));
    }
    let mut kraus = Vec::new();
    for (m, s) in povm.effects.iter().zip(prep) {
        let (mv, mvec) = linalg::eigh(m);
        let (sv, svec) = linalg::eigh(s.matrix());
        for (j, &mu) in mv.iter().enumerate() {
            if mu <= 0.0 {
                continue;
            }
            let e = mvec.column(j).into_owned();
            for (k, &q) in sv.iter().enumerate() {
                if q <= 0.0 {
                    continue;
                }
                let f = svec.column(k).into_owned();
                kraus.push(linalg::outer(&f, &e) * C64::new((mu * q).sqrt(), 0.0));
            }
        }
    }
    Channel::from_kraus(kraus)
}

/// Smallest eigenvalue of the partial transpose of a bipartite operator.
pub fn ppt_min_eigenvalue(choi: &CMatrix, d_in: usize, d_out: usize) -> Result<f64> {
    let pt = linalg::partial_transpose(choi, &[d_in, d_out], &[0])?;
    Ok(linalg::eigvalsh(&pt).last().copied().unwrap_or(0.0))
}

pub fn is_ppt(choi: &CMatrix, d_in: usize, d_out: usize, tol: f64) -> Result<bool> {
    Ok(ppt_min_eigenvalue(choi, d_in, d_out)? >= -tol)
}
