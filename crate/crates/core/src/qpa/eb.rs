//! Covariant measure-and-prepare protocol for `k`-th eigenstate tomography.
//!
//! After weak Schur sampling of `rho^{(x) n}` into sector `lambda`, the
//! measurement `M_U = d_lambda U |hw><hw| U^dagger` is applied and
//! `U |k><k| U^dagger` is prepared. The posterior over `U` is sampled by
//! self-normalised importance sampling from Haar proposals. Sectors are
//! stratified: each one is estimated separately and the results combined
//! with the exact sector probabilities.

use serde::{Deserialize, Serialize};

use super::spectrum::SpectrumParams;
use crate::error::{Error, Result};
use crate::numerics::random::{haar_unitary, par_samples, DEFAULT_STREAMS};
use crate::numerics::stats::self_normalized;
use crate::numerics::{linalg, CMatrix, CVector, DensityOperator};
use crate::schur::partitions::{diagrams, sector_probabilities};
use crate::schur::projectors::{isotypic_projector, MAX_PERMUTATION_FACTORS};
use crate::schur::weights::highest_weight_vector;
use crate::schur::YoungDiagram;

/// Runs whose effective sample size falls below this are flagged.
pub const MIN_ESS: f64 = 100.0;
/// Every sector with non-negligible probability gets at least this many draws.
pub const MIN_SECTOR_SAMPLES: usize = 64;
/// Sectors below this probability are skipped; their mass is reported.
pub const SECTOR_CUTOFF: f64 = 1e-14;
/// Largest `d^n` for the tensor backend.
pub const MAX_TENSOR_DIM: usize = 81;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EbBackend {
    /// Posterior weight `<hw| U^dagger rho_lambda U |hw>` evaluated on
    /// `(C^d)^{(x) n}` with the isotypic projector. Small `n`, `d` only.
    Tensor,
    /// Same weight from leading principal minors of `U^dagger rho U`,
    /// `prod_i Delta_i^{lambda_i - lambda_{i+1}}`, with Schur-polynomial
    /// sector probabilities. Any `n`.
    Irrep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EbConfig {
    pub samples: usize,
    pub seed: u64,
    pub backend: EbBackend,
    pub streams: usize,
}

impl EbConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, backend: EbBackend::Irrep, streams: DEFAULT_STREAMS }
    }

    pub fn backend(mut self, backend: EbBackend) -> Self {
        self.backend = backend;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorEstimate {
    pub lambda: Vec<usize>,
    pub probability: f64,
    pub fidelity: f64,
    pub stderr: f64,
    pub ess: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EbEstimate {
    /// Estimated one-site fidelity with the `k`-th eigenstate.
    pub fidelity: f64,
    pub stderr: f64,
    /// Sum of per-sector Kish effective sample sizes.
    pub ess: f64,
    pub samples: usize,
    /// Probability of sectors that were skipped.
    pub neglected_mass: f64,
    pub low_ess: bool,
    pub sectors: Vec<SectorEstimate>,
}

impl EbEstimate {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.fidelity
    }
}

/// Estimate the fidelity of the covariant protocol with the default
/// (irrep) backend.
pub fn eb_covariant_protocol(rho: &DensityOperator, n: usize, k: usize, samples: usize, seed: u64) -> Result<EbEstimate> {
    eb_covariant_protocol_with(rho, n, k, &EbConfig::new(samples, seed))
}

pub fn eb_covariant_protocol_with(rho: &DensityOperator, n: usize, k: usize, cfg: &EbConfig) -> Result<EbEstimate> {
    if rho.dims().len() != 1 {
        return Err(Error::DimensionMismatch("expected a single-copy state".into()));
    }
    if n == 0 || cfg.samples == 0 {
        return Err(Error::InvalidParameter("n and samples must be positive".into()));
    }
    let d = rho.dim();
    let spec = SpectrumParams::from_state(rho, k)?;
    let (_, vecs) = linalg::eigh(rho.matrix());
    let psi_k: CVector = vecs.column(k - 1).into_owned();
    let big = match cfg.backend {
        EbBackend::Irrep => None,
        EbBackend::Tensor => {
            if d.checked_pow(n as u32).is_none_or(|x| x > MAX_TENSOR_DIM) || n > MAX_PERMUTATION_FACTORS {
                return Err(Error::SizeLimit(format!("tensor backend limited to d^n <= {MAX_TENSOR_DIM}")));
            }
            Some(linalg::kron_power(rho.matrix(), n))
        }
    };
    let sectors: Vec<(YoungDiagram, f64)> = match &big {
        None => sector_probabilities(spec.p(), n),
        Some(big) => diagrams(n, d)
            .into_iter()
            .map(|y| {
                let p = isotypic_projector(y.rows(), d)?.matrix;
                Ok((y, (p.as_ref() * big).trace().re))
            })
            .collect::<Result<_>>()?,
    };

    let mut out = Vec::new();
    let mut neglected = 0.0;
    for (idx, (y, prob)) in sectors.iter().enumerate() {
        if *prob < SECTOR_CUTOFF {
            neglected += prob.max(0.0);
            continue;
        }
        let count = ((cfg.samples as f64 * prob).round() as usize).max(MIN_SECTOR_SAMPLES);
        let seed = cfg.seed ^ (idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let draws: Vec<(f64, f64)> = match &big {
            None => {
                let padded = y.padded();
                let exps: Vec<f64> =
                    (0..d).map(|i| (padded[i] - padded.get(i + 1).copied().unwrap_or(0)) as f64).collect();
                par_samples(count, seed, cfg.streams, |rng| {
                    let u = haar_unitary(d, rng);
                    let g = u.adjoint() * rho.matrix() * &u;
                    let mut lw = 0.0;
                    for (i, &e) in exps.iter().enumerate() {
                        if e > 0.0 {
                            let minor = linalg::leading_minor(&g, i + 1).re;
                            lw += if minor > 0.0 { e * minor.ln() } else { f64::NEG_INFINITY };
                        }
                    }
                    (lw, payoff(&u, &psi_k, k))
                })
            }
            Some(big) => {
                let hw = highest_weight_vector(y)?;
                par_samples(count, seed, cfg.streams, |rng| {
                    let u = haar_unitary(d, rng);
                    let v = linalg::apply_tensor_power(&hw, &u, n);
                    let w = (v.adjoint() * big * &v)[(0, 0)].re / prob;
                    let lw = if w > 0.0 { w.ln() } else { f64::NEG_INFINITY };
                    (lw, payoff(&u, &psi_k, k))
                })
            }
        };
        let (lws, fs): (Vec<f64>, Vec<f64>) = draws.into_iter().unzip();
        let est = self_normalized(&lws, &fs);
        if !est.mean.is_finite() {
            return Err(Error::Numerical(format!("posterior weight vanishes in sector {y}")));
        }
        out.push(SectorEstimate {
            lambda: y.rows().to_vec(),
            probability: *prob,
            fidelity: est.mean,
            stderr: est.stderr,
            ess: est.ess,
            samples: count,
        });
    }
    let covered: f64 = out.iter().map(|s| s.probability).sum();
    if covered <= 0.0 {
        return Err(Error::Numerical("no sector carries weight".into()));
    }
    let fidelity = out.iter().map(|s| s.probability * s.fidelity).sum::<f64>() / covered;
    let stderr = out.iter().map(|s| (s.probability * s.stderr).powi(2)).sum::<f64>().sqrt() / covered;
    let ess: f64 = out.iter().map(|s| s.ess).sum();
    let samples = out.iter().map(|s| s.samples).sum();
    Ok(EbEstimate {
        fidelity: fidelity.min(1.0),
        stderr,
        ess,
        samples,
        neglected_mass: neglected,
        low_ess: ess < MIN_ESS,
        sectors: out,
    })
}

/// `|<psi_k| U |k>|^2`.
fn payoff(u: &CMatrix, psi_k: &CVector, k: usize) -> f64 {
    psi_k.dotc(&u.column(k - 1)).norm_sqr()
}
