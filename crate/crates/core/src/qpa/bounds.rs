//! Sample-complexity and risk bounds for purity amplification and
//! eigenstate tomography.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::spectrum::SpectrumParams;
use crate::error::{Error, Result};

/// Default remainder constant `C = 16 c^2` with `c = 12`.
pub const DEFAULT_C: f64 = 2304.0;
/// Sufficient-copies constant for `k in {1, d}`.
pub const EDGE_CONSTANT: f64 = 98.0;
/// Sufficient-copies constant for `1 < k < d`.
pub const INTERIOR_CONSTANT: f64 = 135.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    /// Whether the hypotheses of the bound hold at these parameters.
    pub valid: bool,
    /// Lower-order terms were dropped.
    pub asymptotic: bool,
    pub constants: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(name: &str, value: f64, valid: bool, asymptotic: bool) -> Self {
        Self { name: name.into(), value, valid, asymptotic, constants: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, v: f64) -> Self {
        self.constants.insert(key.into(), v);
        self
    }
}

fn check_common(m: usize, eps: f64, d_min: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} outside (0, 1]")));
    }
    if !(d_min > 0.0 && d_min <= 1.0) {
        return Err(Error::InvalidParameter(format!("gap {d_min} outside (0, 1]")));
    }
    Ok(())
}

/// Ceiling that ignores floating-point dust just above an integer.
fn ceil_clean(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// Threshold `S_0` beyond which `S^2 > C S ln(C S)`, i.e. the largest root
/// of `S = C ln(C S)`.
pub fn s0(c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("C = {c} must be positive")));
    }
    let f = |s: f64| s - c * (c * s).ln();
    // f is convex with its minimum at s = c; for c <= 1/e it never vanishes.
    let mut lo = c;
    if f(lo) > 0.0 {
        return Ok(0.0);
    }
    let mut hi = 2.0 * c;
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(hi)
}

/// Sufficient number of copies for all-site infidelity `eps` with the
/// default remainder constant.
pub fn coherent_sample_upper(m: usize, eps: f64, d_min: f64) -> Result<BoundReport> {
    coherent_sample_upper_with(m, eps, d_min, DEFAULT_C)
}

/// `min{N + C S ln(C S), 135 m / (eps D^2)}` with `N = m / (eps D^2)` and
/// `S = sqrt(m) / (sqrt(eps) D^2)`. The first branch only counts when
/// `S > S_0`.
pub fn coherent_sample_upper_with(m: usize, eps: f64, d_min: f64, c: f64) -> Result<BoundReport> {
    check_common(m, eps, d_min)?;
    let mf = m as f64;
    let n_lead = mf / (eps * d_min * d_min);
    let s = mf.sqrt() / (eps.sqrt() * d_min * d_min);
    let s_zero = s0(c)?;
    let r_branch = n_lead + c * s * (c * s).ln();
    let interior = INTERIOR_CONSTANT * n_lead;
    let above = s > s_zero;
    let value = if above { r_branch.min(interior) } else { interior };
    Ok(BoundReport::new("coherent_sample_upper", value, true, false)
        .with("C", c)
        .with("S", s)
        .with("S0", s_zero)
        .with("N", n_lead)
        .with("remainder_branch", r_branch)
        .with("interior_branch", interior)
        .with("s_above_s0", if above { 1.0 } else { 0.0 }))
}

/// `ceil(98 m / (eps D_{1,2}^2))`.
pub fn one_gap_upper(m: usize, eps: f64, d12: f64) -> Result<u64> {
    check_common(m, eps, d12)?;
    Ok(ceil_clean(EDGE_CONSTANT * m as f64 / (eps * d12 * d12)))
}

/// `ceil(c m / (eps D_min^2))` with `c = 98` for `k in {1, d}` and `135`
/// otherwise.
pub fn adjacent_gap_upper(m: usize, eps: f64, d_min: f64, k: usize, d: usize) -> Result<u64> {
    check_common(m, eps, d_min)?;
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={d}")));
    }
    let c = if k == 1 || k == d { EDGE_CONSTANT } else { INTERIOR_CONSTANT };
    Ok(ceil_clean(c * m as f64 / (eps * d_min * d_min)))
}

/// `1/(n(1-beta)) sum_j c_j / D_{j,j+1} + 2|J| exp(-(beta sqrt(n) D_min - 4)^2 / 32)`.
/// `terms` holds `(c_j, D_{j,j+1})` for `j in J`. Valid when `0 < beta < 1`
/// and `beta D_min > 4 / sqrt(n)`.
pub fn relative_gap_loss(n: usize, beta: f64, terms: &[(f64, f64)], d_min: f64) -> Result<BoundReport> {
    if n == 0 || terms.is_empty() || terms.iter().any(|t| t.1 <= 0.0) {
        return Err(Error::InvalidParameter("need n >= 1 and positive adjacent gaps".into()));
    }
    let nf = n as f64;
    let valid = beta > 0.0 && beta < 1.0 && beta * d_min > 4.0 / nf.sqrt();
    let sum: f64 = terms.iter().map(|(c, g)| c / g).sum();
    let first = sum / (nf * (1.0 - beta));
    let z = beta * nf.sqrt() * d_min - 4.0;
    let second = 2.0 * terms.len() as f64 * (-z * z / 32.0).exp();
    Ok(BoundReport::new("relative_gap_loss", first + second, valid, false)
        .with("sector_term", first)
        .with("tail_term", second)
        .with("beta", beta))
}

/// `(1 - 8 exp(-n D^2 / 256)) (d - k) / (2 (n + d - k))`, valid for
/// `n >= (4 / D)(1 + 1 / D)`.
pub fn eb_one_site_lower(n: usize, d: usize, k: usize, d_min: f64) -> Result<BoundReport> {
    if k == 0 || k > d || d_min <= 0.0 {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= d and a positive gap, got k={k} d={d}")));
    }
    let nf = n as f64;
    let threshold = 4.0 / d_min * (1.0 + 1.0 / d_min);
    let a = (d - k) as f64;
    let value = (1.0 - 8.0 * (-nf * d_min * d_min / 256.0).exp()) * a / (2.0 * (nf + a));
    Ok(BoundReport::new("eb_one_site_lower", value, nf >= threshold, false).with("n_threshold", threshold))
}

/// Coefficient `sum_{i != k} p_i / D_{k,i}^2 + sum_{i > k} 1 / D_{k,i}`
/// of the leading `1/n` term of the optimal measure-and-prepare risk.
pub fn eb_asymptotic_coefficient(spec: &SpectrumParams) -> f64 {
    let p = spec.p();
    let k = spec.k();
    let mut total = 0.0;
    for (i, g) in spec.gaps() {
        total += p[i - 1] / (g * g);
        if i > k {
            total += 1.0 / g;
        }
    }
    total
}

/// First-order one-site fidelity `1 - coefficient / n`; the `o(1/n)`
/// remainder is dropped.
pub fn eb_asymptotic_fidelity(n: usize, spec: &SpectrumParams) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let coef = eb_asymptotic_coefficient(spec);
    Ok(BoundReport::new("eb_asymptotic_fidelity", 1.0 - coef / n as f64, true, true).with("coefficient", coef))
}

/// `(d - k) / (2 eps) - (d - k)`; the `(1 - o(1))` factor is dropped.
pub fn eb_sample_lower(eps: f64, d: usize, k: usize) -> Result<BoundReport> {
    if eps <= 0.0 || k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("need eps > 0 and 1 <= k <= d, got eps={eps} k={k} d={d}")));
    }
    let a = (d - k) as f64;
    Ok(BoundReport::new("eb_sample_lower", a / (2.0 * eps) - a, true, true))
}

/// Smallest `d` at which [`eb_sample_lower`] exceeds the interior-constant
/// coherent bound `135 m / (eps D^2)`, or `None` if it never does.
pub fn separation_crossover(eps: f64, k: usize, d_min: f64, m: usize) -> Result<Option<usize>> {
    check_common(m, eps, d_min)?;
    let coherent = INTERIOR_CONSTANT * m as f64 / (eps * d_min * d_min);
    let per_level = 1.0 / (2.0 * eps) - 1.0;
    if per_level <= 0.0 {
        return Ok(None);
    }
    // Start just below the analytic estimate and step up.
    let estimate = (coherent / per_level).floor() as usize;
    let mut d = (k + estimate).saturating_sub(2).max(k);
    while eb_sample_lower(eps, d, k)?.value <= coherent {
        d += 1;
    }
    Ok(Some(d))
}
