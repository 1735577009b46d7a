use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::DensityOperator;

/// Sorted spectrum with a distinguished, non-degenerate eigenvalue `p_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumParams {
    p: Vec<f64>,
    /// 1-based target index.
    k: usize,
}

/// Gaps below this are treated as degeneracies.
pub const GAP_TOL: f64 = 1e-12;

impl SpectrumParams {
    pub fn new(p: Vec<f64>, k: usize) -> Result<Self> {
        let d = p.len();
        if d == 0 || k == 0 || k > d {
            return Err(Error::InvalidParameter(format!("target index {k} outside 1..={d}")));
        }
        if p.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidParameter(format!("{p:?} is not a probability vector")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(total));
        }
        if p.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!("{p:?} is not sorted in descending order")));
        }
        let out = Self { p, k };
        if d > 1 && out.d_min() <= GAP_TOL {
            return Err(Error::InvalidParameter(format!("eigenvalue p_{k} is degenerate")));
        }
        Ok(out)
    }

    /// Spectrum of a density operator, sorted descending.
    pub fn from_state(rho: &DensityOperator, k: usize) -> Result<Self> {
        let mut p: Vec<f64> = rho.eigenvalues().into_iter().map(|x| x.max(0.0)).collect();
        p.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = p.iter().sum();
        Self::new(p.into_iter().map(|x| x / total).collect(), k)
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    pub fn p_k(&self) -> f64 {
        self.p[self.k - 1]
    }

    /// `D_{k,i} = p_k - p_i` for 1-based `i`.
    pub fn gap(&self, i: usize) -> f64 {
        self.p_k() - self.p[i - 1]
    }

    /// All `D_{k,i}` with `i != k`, as `(i, D_{k,i})`.
    pub fn gaps(&self) -> Vec<(usize, f64)> {
        (1..=self.d()).filter(|&i| i != self.k).map(|i| (i, self.gap(i))).collect()
    }

    pub fn d_min(&self) -> f64 {
        self.gaps().iter().map(|g| g.1.abs()).fold(f64::INFINITY, f64::min)
    }

    /// Adjacent gap `D_{j,j+1} = p_j - p_{j+1}` (1-based `j`).
    pub fn adjacent_gap(&self, j: usize) -> f64 {
        self.p[j - 1] - self.p[j]
    }
}
