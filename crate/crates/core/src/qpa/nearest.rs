//! Projection of an unconstrained estimate onto a parameterised family of
//! pure states in trace distance.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{linalg, CMatrix, CVector, DensityOperator, C64};

type FamilyFn = Arc<dyn Fn(&[f64]) -> CVector + Send + Sync>;

/// Pure states `psi(theta)` over a box of parameters.
#[derive(Clone)]
pub struct PureFamily {
    pub dim: usize,
    pub bounds: Vec<(f64, f64)>,
    /// Axes that wrap around instead of being clamped at their bounds.
    pub periodic: Vec<bool>,
    eval: FamilyFn,
}

impl fmt::Debug for PureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PureFamily").field("dim", &self.dim).field("bounds", &self.bounds).finish()
    }
}

impl PureFamily {
    pub fn new(dim: usize, bounds: Vec<(f64, f64)>, eval: impl Fn(&[f64]) -> CVector + Send + Sync + 'static) -> Self {
        let periodic = vec![false; bounds.len()];
        Self { dim, bounds, periodic, eval: Arc::new(eval) }
    }

    pub fn with_periodic(mut self, periodic: Vec<bool>) -> Self {
        assert_eq!(periodic.len(), self.bounds.len(), "one flag per parameter");
        self.periodic = periodic;
        self
    }

    /// Every pure state of `C^d`: hyperspherical moduli (angles in
    /// `[0, pi/2]`) followed by relative phases in `[0, 2 pi]`.
    pub fn all_pure_states(d: usize) -> Self {
        let mut bounds = vec![(0.0, FRAC_PI_2); d.saturating_sub(1)];
        bounds.extend(vec![(0.0, 2.0 * PI); d.saturating_sub(1)]);
        let mut periodic = vec![false; d.saturating_sub(1)];
        periodic.extend(vec![true; d.saturating_sub(1)]);
        Self::new(d, bounds, move |x| {
            let (angles, phases) = x.split_at(d - 1);
            let mut v = CVector::zeros(d);
            let mut rest = 1.0;
            for j in 0..d {
                let modulus = if j + 1 < d { rest * angles[j].cos() } else { rest };
                if j + 1 < d {
                    rest *= angles[j].sin();
                }
                let phase = if j == 0 { 0.0 } else { phases[j - 1] };
                v[j] = C64::from_polar(modulus, phase);
            }
            v
        })
        .with_periodic(periodic)
    }

    pub fn evaluate(&self, params: &[f64]) -> CVector {
        (self.eval)(params)
    }

    pub fn param_count(&self) -> usize {
        self.bounds.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestOptions {
    /// Total grid points before refinement.
    pub grid_budget: usize,
    /// Refinement stops once every step is below this.
    pub step_tol: f64,
    pub max_evals: usize,
}

impl Default for NearestOptions {
    fn default() -> Self {
        Self { grid_budget: 4096, step_tol: 1e-10, max_evals: 200_000 }
    }
}

#[derive(Debug, Clone)]
pub struct NearestState {
    pub state: DensityOperator,
    pub params: Vec<f64>,
    /// Trace distance from the input operator.
    pub distance: f64,
    /// False when the evaluation budget ran out before the step tolerance.
    pub converged: bool,
}

/// Improvements smaller than this count as ties.
const TIE_TOL: f64 = 1e-13;

fn distance_to(sigma: &CMatrix, psi: &CVector) -> f64 {
    0.5 * linalg::trace_norm_hermitian(&(sigma - linalg::projector(psi)))
}

/// Family member closest to `sigma` in trace distance, via a uniform grid
/// followed by compass search. Ties (within `1e-13`) keep the first grid
/// point.
pub fn nearest_state_estimator(sigma: &CMatrix, family: &PureFamily) -> Result<NearestState> {
    nearest_state_with(sigma, family, &NearestOptions::default())
}

pub fn nearest_state_with(sigma: &CMatrix, family: &PureFamily, opts: &NearestOptions) -> Result<NearestState> {
    if sigma.shape() != (family.dim, family.dim) {
        return Err(Error::DimensionMismatch(format!("operator is not {0}x{0}", family.dim)));
    }
    let defect = linalg::hermiticity_defect(sigma);
    if defect > 1e-9 {
        return Err(Error::NotHermitian(defect));
    }
    let sigma = linalg::hermitian_part(sigma);
    let p = family.param_count();
    let objective = |x: &[f64]| distance_to(&sigma, &family.evaluate(x));

    let per_axis = if p == 0 { 1 } else { ((opts.grid_budget as f64).powf(1.0 / p as f64).floor() as usize).max(2) };
    let axis = |j: usize, i: usize| {
        let (lo, hi) = family.bounds[j];
        lo + (hi - lo) * i as f64 / (per_axis - 1) as f64
    };
    let mut best_x: Vec<f64> = family.bounds.iter().map(|b| b.0).collect();
    let mut best = objective(&best_x);
    let mut evals = 1usize;
    let total = per_axis.pow(p as u32);
    let mut x = vec![0.0; p];
    for flat in 0..total {
        let mut rem = flat;
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = axis(j, rem % per_axis);
            rem /= per_axis;
        }
        let v = objective(&x);
        evals += 1;
        if v < best - TIE_TOL {
            best = v;
            best_x.clone_from(&x);
        }
    }

    let mut steps: Vec<f64> = family.bounds.iter().map(|(lo, hi)| (hi - lo) / (per_axis - 1).max(1) as f64).collect();
    let mut converged = p == 0;
    while !converged && evals < opts.max_evals {
        let mut improved = false;
        for j in 0..p {
            for sign in [1.0, -1.0] {
                let mut trial = best_x.clone();
                let (lo, hi) = family.bounds[j];
                let moved = trial[j] + sign * steps[j];
                trial[j] = if family.periodic[j] { lo + (moved - lo).rem_euclid(hi - lo) } else { moved.clamp(lo, hi) };
                let v = objective(&trial);
                evals += 1;
                if v < best - TIE_TOL {
                    best = v;
                    best_x = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            for s in &mut steps {
                *s *= 0.5;
            }
            converged = steps.iter().all(|&s| s < opts.step_tol);
        }
    }
    let psi = family.evaluate(&best_x);
    let state = DensityOperator::pure_single(&(&psi / C64::new(psi.norm(), 0.0)))?;
    Ok(NearestState { state, params: best_x, distance: best, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{haar_state_vector, seeded_rng};
    use rand::Rng;

    #[test]
    fn all_pure_states_are_normalised() {
        let fam = PureFamily::all_pure_states(3);
        let v = fam.evaluate(&[0.3, 1.1, 2.0, 5.0]);
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn member_of_family_is_recovered() {
        let fam = PureFamily::all_pure_states(2);
        let mut rng = seeded_rng(2);
        for _ in 0..5 {
            let psi = haar_state_vector(2, &mut rng);
            let res = nearest_state_estimator(&linalg::projector(&psi), &fam).unwrap();
            assert!(res.converged);
            assert!(res.distance < 1e-7, "{}", res.distance);
        }
    }

    #[test]
    fn maximally_mixed_ties_at_one_half() {
        let fam = PureFamily::all_pure_states(2);
        let res = nearest_state_estimator(&(linalg::identity(2) * C64::new(0.5, 0.0)), &fam).unwrap();
        assert!((res.distance - 0.5).abs() < 1e-12);
        assert_eq!(res.params, vec![0.0, 0.0]);
    }

    #[test]
    fn factor_two_guarantee_on_random_qubits() {
        let fam = PureFamily::all_pure_states(2);
        let opts = NearestOptions { grid_budget: 256, ..Default::default() };
        let mut rng = seeded_rng(41);
        for _ in 0..1000 {
            let target = haar_state_vector(2, &mut rng);
            let t = linalg::projector(&target);
            // Unconstrained estimate: target plus a traceless Hermitian
            // perturbation, possibly leaving the state space.
            let scale: f64 = rng.random_range(0.0..0.5);
            let h = CMatrix::from_fn(2, 2, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let mut h = linalg::hermitian_part(&h);
            let tr = linalg::trace(&h) / C64::new(2.0, 0.0);
            h -= linalg::identity(2) * tr;
            let sigma = &t + h * C64::new(scale, 0.0);
            let res = nearest_state_with(&sigma, &fam, &opts).unwrap();
            let d_sigma = 0.5 * linalg::trace_norm_hermitian(&(&sigma - &t));
            let d_proj = 0.5 * linalg::trace_norm_hermitian(&(res.state.matrix() - &t));
            assert!(d_proj <= 2.0 * d_sigma + 1e-7, "{d_proj} > 2 * {d_sigma}");
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let fam = PureFamily::all_pure_states(2);
        assert!(nearest_state_estimator(&linalg::identity(3), &fam).is_err());
    }
}
