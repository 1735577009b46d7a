use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::loss::Loss;
use crate::error::{Error, Result};
use crate::numerics::random::{haar_unitary, par_samples, SimRng, DEFAULT_STREAMS};
use crate::numerics::stats::mean_stderr;
use crate::numerics::{haar_pure_state, linalg, Channel, CMatrix, DensityOperator};

pub type Sampler = Arc<dyn Fn(&mut SimRng) -> DensityOperator + Send + Sync>;
pub type TargetMap = Arc<dyn Fn(&DensityOperator) -> Result<DensityOperator> + Send + Sync>;

/// Anything that maps `n` copies of an input to an output operator. The
/// generator lets stochastic protocols (sampled measurements) draw
/// outcomes.
pub trait Protocol: Send + Sync {
    fn output(&self, sigma: &DensityOperator, n: usize, rng: &mut SimRng) -> Result<CMatrix>;
}

impl Protocol for Channel {
    fn output(&self, sigma: &DensityOperator, n: usize, _rng: &mut SimRng) -> Result<CMatrix> {
        self.apply_matrix(&linalg::kron_power(sigma.matrix(), n))
    }
}

/// Protocol given as a closure.
pub struct FnProtocol<F>(pub F);

impl<F> Protocol for FnProtocol<F>
where
    F: Fn(&DensityOperator, usize, &mut SimRng) -> Result<CMatrix> + Send + Sync,
{
    fn output(&self, sigma: &DensityOperator, n: usize, rng: &mut SimRng) -> Result<CMatrix> {
        (self.0)(sigma, n, rng)
    }
}

/// An inference task: inputs drawn from a family, `n` copies in, a target
/// on `m` output sites, and a loss.
#[derive(Clone)]
pub struct CqiTask {
    pub name: String,
    pub sampler: Sampler,
    pub target: TargetMap,
    /// Single-site target used by one-site risks.
    pub site_target: Option<TargetMap>,
    pub loss: Loss,
    pub n: usize,
    pub m: usize,
    pub out_site_dim: usize,
}

impl std::fmt::Debug for CqiTask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CqiTask")
            .field("name", &self.name)
            .field("loss", &self.loss)
            .field("n", &self.n)
            .field("m", &self.m)
            .field("out_site_dim", &self.out_site_dim)
            .finish()
    }
}

pub fn haar_pure_sampler(d: usize) -> Sampler {
    Arc::new(move |rng| haar_pure_state(d, rng))
}

/// Unitary orbit `{U sigma0 U^dagger}` under Haar-random `U`.
pub fn orbit_sampler(sigma0: DensityOperator) -> Sampler {
    Arc::new(move |rng| {
        let u = haar_unitary(sigma0.dim(), rng);
        sigma0.conjugate(&u).expect("square unitary of matching size")
    })
}

impl CqiTask {
    /// Reproduce `m` copies of the input from `n` copies.
    pub fn cloning(sampler: Sampler, d: usize, n: usize, m: usize, loss: Loss) -> Self {
        Self {
            name: format!("clone_{n}_to_{m}"),
            sampler,
            target: Arc::new(move |s: &DensityOperator| Ok(s.tensor_power(m))),
            site_target: Some(Arc::new(|s: &DensityOperator| Ok(s.clone()))),
            loss,
            n,
            m,
            out_site_dim: d,
        }
    }

    /// `n = m = 1`, target equals the input.
    pub fn identity(sampler: Sampler, d: usize, loss: Loss) -> Self {
        let mut t = Self::cloning(sampler, d, 1, 1, loss);
        t.name = "identity".into();
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskMode {
    Average,
    WorstCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteMode {
    AllSite,
    OneSite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub mode: RiskMode,
    pub site: SiteMode,
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    /// Set for worst-case values taken over a finite candidate set: the
    /// value is a lower bound on the supremum.
    pub sup_lower_bound: bool,
}

fn output_state(task: &CqiTask, proto: &dyn Protocol, sigma: &DensityOperator, rng: &mut SimRng) -> Result<CMatrix> {
    let out = proto.output(sigma, task.n, rng)?;
    let expect = task.out_site_dim.pow(task.m as u32);
    if out.nrows() != expect {
        return Err(Error::DimensionMismatch(format!(
            "protocol output has dimension {}, task expects {expect}",
            out.nrows()
        )));
    }
    Ok(out)
}

/// All-site loss for one input.
pub fn input_loss(task: &CqiTask, proto: &dyn Protocol, sigma: &DensityOperator, rng: &mut SimRng) -> Result<f64> {
    let out = output_state(task, proto, sigma, rng)?;
    let target = (task.target)(sigma)?;
    if target.dim() != out.nrows() {
        return Err(Error::DimensionMismatch("target and output dimensions differ".into()));
    }
    Ok(task.loss.eval(target.matrix(), &out))
}

/// Loss of each single-site output marginal against the site target.
pub fn site_losses(task: &CqiTask, proto: &dyn Protocol, sigma: &DensityOperator, rng: &mut SimRng) -> Result<Vec<f64>> {
    let site_target = task
        .site_target
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("task {} has no single-site target", task.name)))?;
    let out = output_state(task, proto, sigma, rng)?;
    let gamma = site_target(sigma)?;
    if gamma.dim() != task.out_site_dim {
        return Err(Error::DimensionMismatch("site target dimension".into()));
    }
    let dims = vec![task.out_site_dim; task.m];
    (0..task.m)
        .map(|i| {
            let marg = linalg::partial_trace(&out, &dims, &[i])?;
            Ok(task.loss.eval(gamma.matrix(), &marg))
        })
        .collect()
}

fn collect(values: Vec<Result<f64>>) -> Result<Vec<f64>> {
    values.into_iter().collect()
}

/// Monte-Carlo average risk over inputs drawn from the task family.
pub fn average_risk(task: &CqiTask, proto: &dyn Protocol, samples: usize, seed: u64) -> Result<RiskReport> {
    let vals = collect(par_samples(samples, seed, DEFAULT_STREAMS, |rng| {
        let sigma = (task.sampler)(rng);
        input_loss(task, proto, &sigma, rng)
    }))?;
    let est = mean_stderr(&vals);
    Ok(RiskReport {
        mode: RiskMode::Average,
        site: SiteMode::AllSite,
        value: est.mean,
        stderr: est.stderr,
        samples,
        seed,
        sup_lower_bound: false,
    })
}

/// Average over sampled inputs of the site-averaged one-site loss.
pub fn one_site_risk(task: &CqiTask, proto: &dyn Protocol, samples: usize, seed: u64) -> Result<RiskReport> {
    let vals = collect(par_samples(samples, seed, DEFAULT_STREAMS, |rng| {
        let sigma = (task.sampler)(rng);
        let l = site_losses(task, proto, &sigma, rng)?;
        Ok(l.iter().sum::<f64>() / l.len() as f64)
    }))?;
    let est = mean_stderr(&vals);
    Ok(RiskReport {
        mode: RiskMode::Average,
        site: SiteMode::OneSite,
        value: est.mean,
        stderr: est.stderr,
        samples,
        seed,
        sup_lower_bound: false,
    })
}

/// Maximum loss over a finite candidate set; a lower bound on the
/// worst-case risk.
pub fn worst_case_risk(
    task: &CqiTask,
    proto: &dyn Protocol,
    candidates: &[DensityOperator],
    seed: u64,
) -> Result<RiskReport> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("worst-case risk needs at least one candidate".into()));
    }
    let mut rng = crate::numerics::random::seeded_rng(seed);
    let mut worst = f64::NEG_INFINITY;
    for sigma in candidates {
        worst = worst.max(input_loss(task, proto, sigma, &mut rng)?);
    }
    Ok(RiskReport {
        mode: RiskMode::WorstCase,
        site: SiteMode::AllSite,
        value: worst,
        stderr: 0.0,
        samples: candidates.len(),
        seed,
        sup_lower_bound: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::seeded_rng;

    #[test]
    fn identity_protocol_has_zero_risk() {
        let task = CqiTask::identity(haar_pure_sampler(2), 2, Loss::Infidelity);
        let r = average_risk(&task, &Channel::identity(2), 200, 1).unwrap();
        assert!(r.value.abs() < 1e-9);
        assert!(r.stderr < 1e-9);
    }

    #[test]
    fn replace_protocol_risk_is_one_half() {
        let task = CqiTask::identity(haar_pure_sampler(2), 2, Loss::Infidelity);
        let ch = Channel::trace_and_replace(2, &DensityOperator::basis(2, 0));
        let r = average_risk(&task, &ch, 10_000, 2).unwrap();
        assert!((r.value - 0.5).abs() < 0.01, "{r:?}");
    }

    #[test]
    fn zero_loss_gives_zero() {
        let task = CqiTask::identity(haar_pure_sampler(2), 2, Loss::Zero);
        let ch = Channel::depolarizing(2, 0.7).unwrap();
        assert_eq!(average_risk(&task, &ch, 50, 3).unwrap().value, 0.0);
    }

    #[test]
    fn worst_case_examples() {
        let task = CqiTask::identity(haar_pure_sampler(2), 2, Loss::Infidelity);
        let mut rng = seeded_rng(4);
        let cands: Vec<_> = (0..20).map(|_| haar_pure_state(2, &mut rng)).collect();
        let r = worst_case_risk(&task, &Channel::identity(2), &cands, 0).unwrap();
        assert!(r.value.abs() < 1e-9 && r.sup_lower_bound);
        let dep = Channel::depolarizing(2, 1.0).unwrap();
        assert!(worst_case_risk(&task, &dep, &cands, 0).unwrap().value <= 1.0);
        assert!(worst_case_risk(&task, &dep, &[], 0).is_err());
    }

    #[test]
    fn one_site_equals_all_site_for_single_output() {
        let task = CqiTask::identity(haar_pure_sampler(2), 2, Loss::Infidelity);
        let ch = Channel::depolarizing(2, 0.3).unwrap();
        let a = average_risk(&task, &ch, 300, 5).unwrap();
        let b = one_site_risk(&task, &ch, 300, 5).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
    }

    #[test]
    fn oracle_protocol_has_zero_one_site_risk() {
        let task = CqiTask::cloning(haar_pure_sampler(2), 2, 1, 3, Loss::Infidelity);
        let oracle = FnProtocol(|s: &DensityOperator, _n: usize, _r: &mut SimRng| Ok(s.tensor_power(3).into_matrix()));
        let r = one_site_risk(&task, &oracle, 50, 6).unwrap();
        assert!(r.value.abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let task = CqiTask::cloning(haar_pure_sampler(2), 2, 1, 2, Loss::Infidelity);
        assert!(matches!(average_risk(&task, &Channel::identity(2), 4, 0), Err(Error::DimensionMismatch(_))));
    }
}
