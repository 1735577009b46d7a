//! Ingredients of the sample-complexity lower bound for measure-first DME:
//! the `theta` family of pure generators, the embedding of their outputs,
//! the admissible radius `r0`, and the hypercube discrimination chain.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::lmr::is_multiple_of_two_pi;
use crate::error::{Error, Result};
use crate::numerics::random::seeded_rng;
use crate::numerics::state::trace_distance_matrices;
use crate::numerics::{linalg, CMatrix, CVector, DensityOperator, C64};
use crate::qpa::bounds::BoundReport;

/// Radius grid used by [`compute_r0`].
pub const R0_GRID: f64 = 1e-3;
/// Points sampled inside each trial ball.
pub const R0_SAMPLES: usize = 10_000;

/// Real coordinates `theta` of `|theta> = sqrt(1 - |theta|^2)|0> + sum_j theta_j |j>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaPoint {
    theta: Vec<f64>,
}

impl ThetaPoint {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        let norm = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!("|theta| = {norm} exceeds 1")));
        }
        Ok(Self { theta })
    }

    pub fn zero(d: usize) -> Self {
        Self { theta: vec![0.0; d.saturating_sub(1)] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.theta
    }

    pub fn norm_sqr(&self) -> f64 {
        self.theta.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Dimension of the carrying Hilbert space, `len + 1`.
    pub fn dim(&self) -> usize {
        self.theta.len() + 1
    }

    pub fn admissible(&self, r0: f64) -> bool {
        self.norm() <= r0 + 1e-12
    }

    pub fn vector(&self) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[0] = C64::new((1.0 - self.norm_sqr()).max(0.0).sqrt(), 0.0);
        for (j, &t) in self.theta.iter().enumerate() {
            v[j + 1] = C64::new(t, 0.0);
        }
        v
    }
}

pub fn theta_state(theta: &ThetaPoint) -> DensityOperator {
    DensityOperator::pure_single(&theta.vector()).expect("unit vector")
}

/// `A = 1 + (e^{-iT} - 1)(1 - theta^2)`, `B = (e^{-iT} - 1) sqrt(1 - theta^2)`.
pub fn gamma_coefficients(theta: &ThetaPoint, t: f64) -> (C64, C64) {
    let r = theta.norm_sqr();
    let c = C64::from_polar(1.0, -t) - 1.0;
    (1.0 + c * (1.0 - r), c * (1.0 - r).max(0.0).sqrt())
}

/// `e^{-i T theta} |0> = A |0> + B sum_j theta_j |j>`.
pub fn gamma_vector(theta: &ThetaPoint, t: f64) -> CVector {
    let (a, b) = gamma_coefficients(theta, t);
    let mut v = CVector::zeros(theta.dim());
    v[0] = a;
    for (j, &x) in theta.coords().iter().enumerate() {
        v[j + 1] = b * x;
    }
    v
}

pub fn gamma_state(theta: &ThetaPoint, t: f64) -> DensityOperator {
    DensityOperator::pure_single(&gamma_vector(theta, t)).expect("unitary image of a unit vector")
}

/// Same state from the matrix exponential of the generator.
pub fn gamma_state_exp(theta: &ThetaPoint, t: f64) -> Result<DensityOperator> {
    let u = linalg::herm_exp(theta_state(theta).matrix(), t)?;
    let v = u.column(0).into_owned();
    DensityOperator::pure_single(&v)
}

/// `a_T = sin^2(T/2) / 4`.
pub fn a_t(t: f64) -> f64 {
    0.25 * (t / 2.0).sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCheck {
    /// `1 - F(gamma_theta, gamma_eta)`.
    pub lhs: f64,
    /// `a_T |theta - eta|^2`.
    pub rhs: f64,
    pub holds: bool,
}

/// Compare both sides of `1 - F(gamma_theta, gamma_eta) >= a_T |theta - eta|^2`
/// for points inside the radius `r0`.
pub fn embedding_bound_check(theta: &ThetaPoint, eta: &ThetaPoint, t: f64, r0: f64) -> Result<EmbeddingCheck> {
    if theta.dim() != eta.dim() {
        return Err(Error::DimensionMismatch("theta and eta have different lengths".into()));
    }
    if !theta.admissible(r0) || !eta.admissible(r0) {
        return Err(Error::InvalidParameter(format!(
            "points of norm {} and {} are outside r0 = {r0}",
            theta.norm(),
            eta.norm()
        )));
    }
    let overlap = gamma_vector(theta, t).dotc(&gamma_vector(eta, t)).norm_sqr();
    let lhs = 1.0 - overlap;
    let dist: f64 = theta.coords().iter().zip(eta.coords()).map(|(a, b)| (a - b).powi(2)).sum();
    let rhs = a_t(t) * dist;
    // Rounding in the overlap is of order 1e-16.
    Ok(EmbeddingCheck { lhs, rhs, holds: lhs >= rhs - 1e-14 })
}

/// `G(zeta) = (B / A) zeta` and the Jacobian defect
/// `E = grad G(zeta) - (1 - e^{iT}) I`.
pub fn embedding_map(zeta: &[f64], t: f64) -> Result<(CVector, CMatrix)> {
    let r: f64 = zeta.iter().map(|x| x * x).sum();
    if r >= 1.0 {
        return Err(Error::InvalidParameter("embedding needs |zeta| < 1".into()));
    }
    let c = C64::from_polar(1.0, -t) - 1.0;
    let a = 1.0 + c * (1.0 - r);
    if a.norm() < 1e-12 {
        return Err(Error::Numerical("A(zeta) vanishes".into()));
    }
    let sq = (1.0 - r).sqrt();
    let b = c * sq;
    let g = b / a;
    // Derivatives in r = |zeta|^2.
    let db = -c / (2.0 * sq);
    let da = -c;
    let dg = (db * a - b * da) / (a * a);
    let g0 = 1.0 - C64::from_polar(1.0, t);
    let m = zeta.len();
    let gv = CVector::from_iterator(m, zeta.iter().map(|&z| g * z));
    let e = CMatrix::from_fn(m, m, |i, j| {
        let diag = if i == j { g - g0 } else { C64::new(0.0, 0.0) };
        diag + dg * 2.0 * zeta[i] * zeta[j]
    });
    Ok((gv, e))
}

fn conditions_hold(zeta: &[f64], t: f64) -> bool {
    let half_gap = 0.5 * (1.0 - C64::from_polar(1.0, t)).norm();
    match embedding_map(zeta, t) {
        Ok((g, e)) => g.norm() <= 0.5 && linalg::operator_norm(&e) <= half_gap,
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct R0Options {
    /// Length of `zeta`.
    pub m: usize,
    pub samples: usize,
    pub grid: f64,
    pub seed: u64,
}

impl Default for R0Options {
    fn default() -> Self {
        Self { m: 3, samples: R0_SAMPLES, grid: R0_GRID, seed: 0 }
    }
}

/// Check both embedding conditions on `samples` points of the ball of
/// radius `radius`: an evenly spaced radial sweep (reaching the boundary)
/// paired with random directions.
pub fn r0_conditions_hold(t: f64, radius: f64, opts: &R0Options) -> bool {
    let mut rng = seeded_rng(opts.seed);
    let steps = opts.samples.max(2);
    (0..steps).all(|i| {
        let rad = radius * i as f64 / (steps - 1) as f64;
        let mut dir: Vec<f64> = (0..opts.m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        for x in &mut dir {
            *x *= rad / norm;
        }
        conditions_hold(&dir, t)
    })
}

/// Largest radius on the grid for which both embedding conditions hold,
/// found by bisection and reduced by one grid step.
pub fn compute_r0(t: f64) -> Result<f64> {
    compute_r0_with(t, &R0Options::default())
}

pub fn compute_r0_with(t: f64, opts: &R0Options) -> Result<f64> {
    if is_multiple_of_two_pi(t) {
        return Err(Error::InvalidParameter(format!("T = {t} is a multiple of 2 pi; the embedding degenerates")));
    }
    let top = ((1.0 / opts.grid).floor() as usize).saturating_sub(1);
    let pass = |j: usize| r0_conditions_hold(t, j as f64 * opts.grid, opts);
    let best = if pass(top) {
        top
    } else {
        let (mut lo, mut hi) = (0usize, top);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if pass(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    if best < 2 {
        return Err(Error::Numerical(format!(
            "no admissible radius above {} for T = {t}: the conditions fail at the first grid point",
            opts.grid
        )));
    }
    Ok((best - 1) as f64 * opts.grid)
}

/// `n >= c_T d / eps` with `c_T = a_T / 2048`, valid for
/// `0 < eps <= eps_T = a_T r0^2 / 1024`.
pub fn incoherent_lower_bound(eps: f64, d: usize, t: f64) -> Result<BoundReport> {
    if eps <= 0.0 || d == 0 {
        return Err(Error::InvalidParameter(format!("need eps > 0 and d >= 1, got eps={eps} d={d}")));
    }
    let at = a_t(t);
    if is_multiple_of_two_pi(t) {
        return Ok(BoundReport::new("incoherent_lower_bound", 0.0, false, false).with("a_T", at));
    }
    let r0 = compute_r0(t)?;
    let c_t = at / 2048.0;
    let eps_t = at * r0 * r0 / 1024.0;
    Ok(BoundReport::new("incoherent_lower_bound", c_t * d as f64 / eps, eps <= eps_t, false)
        .with("a_T", at)
        .with("c_T", c_t)
        .with("r0", r0)
        .with("eps_T", eps_t))
}

/// Minimum error probability `(1 - D_tr) / 2` for discriminating two
/// equiprobable states.
pub fn helstrom_error(rho0: &DensityOperator, rho1: &DensityOperator) -> Result<f64> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch("helstrom_error".into()));
    }
    Ok(0.5 * (1.0 - trace_distance_matrices(rho0.matrix(), rho1.matrix())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypercubeChain {
    pub alpha: f64,
    /// `|<theta_tau|theta_tau'>|^{2n}` for neighbouring corners.
    pub overlap: f64,
    /// `(1 - 2 alpha^2)^{2n}`.
    pub overlap_formula: f64,
    /// `e^{-8 n alpha^2}`.
    pub exp_lower: f64,
    /// Trace distance of the `n`-copy states.
    pub trace_distance: f64,
    pub helstrom: f64,
}

/// Neighbouring corners `alpha tau`, `alpha tau^(j)` of the hypercube with
/// `n alpha^2 = 1/64` on `C^d`, flipping the first coordinate.
pub fn hypercube_chain(n: usize, d: usize) -> Result<HypercubeChain> {
    if n == 0 || d < 2 {
        return Err(Error::InvalidParameter("need n >= 1 and d >= 2".into()));
    }
    let m = d - 1;
    let alpha = 1.0 / (8.0 * (n as f64).sqrt());
    let tau = ThetaPoint::new(vec![alpha; m])?;
    let mut flipped = vec![alpha; m];
    flipped[0] = -alpha;
    let tau_j = ThetaPoint::new(flipped)?;
    let single = tau.vector().dotc(&tau_j.vector()).norm_sqr();
    let overlap = single.powi(n as i32);
    // Pure product states: D_tr = sqrt(1 - |<a|b>|^2).
    let trace_distance = (1.0 - overlap).max(0.0).sqrt();
    Ok(HypercubeChain {
        alpha,
        overlap,
        overlap_formula: (1.0 - 2.0 * alpha * alpha).powi(2 * n as i32),
        exp_lower: (-8.0 * n as f64 * alpha * alpha).exp(),
        trace_distance,
        helstrom: 0.5 * (1.0 - trace_distance),
    })
}
