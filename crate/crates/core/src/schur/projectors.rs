use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::ToPrimitive;
use rand::Rng;

use super::partitions::{cycle_type, diagrams, factorial, permutations, sn_character, sn_dim, YoungDiagram};
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, DensityOperator, C64};

/// Largest number of tensor factors for which all `n!` permutation
/// operators are materialised.
pub const MAX_PERMUTATION_FACTORS: usize = 6;

/// Basis-index map of the operator that moves factor `k` to position
/// `perm[k]`: `U |i_0 .. i_{n-1}> = |j>` with `j_{perm[k]} = i_k`.
pub fn permutation_index_map(perm: &[usize], d: usize) -> Vec<usize> {
    let n = perm.len();
    let total = d.pow(n as u32);
    let mut stride = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        stride[k] = stride[k + 1] * d;
    }
    let mut out = vec![0usize; total];
    let mut digits = vec![0usize; n];
    for (idx, slot) in out.iter_mut().enumerate() {
        let mut rem = idx;
        for k in (0..n).rev() {
            digits[k] = rem % d;
            rem /= d;
        }
        *slot = (0..n).map(|k| digits[k] * stride[perm[k]]).sum();
    }
    out
}

/// Dense permutation operator on `(C^d)^{(x) n}`.
pub fn permutation_operator(perm: &[usize], d: usize) -> CMatrix {
    let map = permutation_index_map(perm, d);
    let mut u = CMatrix::zeros(map.len(), map.len());
    for (i, &j) in map.iter().enumerate() {
        u[(j, i)] = C64::new(1.0, 0.0);
    }
    u
}

fn check_factor_count(n: usize) -> Result<()> {
    if n > MAX_PERMUTATION_FACTORS {
        return Err(Error::SizeLimit(format!(
            "{n} tensor factors exceed the permutation limit of {MAX_PERMUTATION_FACTORS}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct IsotypicProjector {
    pub lambda: Vec<usize>,
    pub d: usize,
    pub matrix: Arc<CMatrix>,
    /// True when `lambda` has more than `d` rows, so the projector is zero.
    pub vanishes: bool,
}

type ProjectorCache = RwLock<HashMap<(Vec<usize>, usize), Arc<CMatrix>>>;

fn projector_cache() -> &'static ProjectorCache {
    static CACHE: OnceLock<ProjectorCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `P_lambda = dim(lambda)/n! sum_pi chi_lambda(pi) U_pi` on `(C^d)^{(x) n}`.
pub fn isotypic_projector(lambda: &[usize], d: usize) -> Result<IsotypicProjector> {
    let n: usize = lambda.iter().sum();
    check_factor_count(n)?;
    let lambda: Vec<usize> = lambda.iter().copied().filter(|&x| x > 0).collect();
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(format!("{lambda:?} is not a partition")));
    }
    let vanishes = lambda.len() > d;
    let key = (lambda.clone(), d);
    if let Some(m) = projector_cache().read().expect("cache lock").get(&key) {
        return Ok(IsotypicProjector { lambda, d, matrix: Arc::clone(m), vanishes });
    }
    let total = d.pow(n as u32);
    let mut p = CMatrix::zeros(total, total);
    if !vanishes {
        let scale = sn_dim(&lambda).to_f64().expect("small") / factorial(n).to_f64().expect("small");
        let mut chars: HashMap<Vec<usize>, i64> = HashMap::new();
        for perm in permutations(n) {
            let ct = cycle_type(&perm);
            let chi = match chars.get(&ct) {
                Some(&c) => c,
                None => {
                    let c = sn_character(&lambda, &ct)?;
                    chars.insert(ct, c);
                    c
                }
            };
            if chi == 0 {
                continue;
            }
            let w = C64::new(scale * chi as f64, 0.0);
            for (i, j) in permutation_index_map(&perm, d).into_iter().enumerate() {
                p[(j, i)] += w;
            }
        }
    }
    let m = Arc::new(p);
    projector_cache().write().expect("cache lock").insert(key, Arc::clone(&m));
    Ok(IsotypicProjector { lambda, d, matrix: m, vanishes })
}

/// Isotypic projectors and sector probabilities of an `n`-copy state.
#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    pub sectors: Vec<(YoungDiagram, Arc<CMatrix>, f64)>,
}

fn copies_of(sigma: &DensityOperator) -> Result<(usize, usize)> {
    let dims = sigma.dims();
    let d = dims[0];
    if dims.iter().any(|&x| x != d) {
        return Err(Error::DimensionMismatch(format!("subsystems {dims:?} are not identical copies")));
    }
    Ok((d, dims.len()))
}

pub fn sector_decomposition(sigma: &DensityOperator) -> Result<SectorDecomposition> {
    let (d, n) = copies_of(sigma)?;
    let mut sectors = Vec::new();
    for y in diagrams(n, d) {
        let p = isotypic_projector(y.rows(), d)?.matrix;
        let prob = (p.as_ref() * sigma.matrix()).trace().re.max(0.0);
        sectors.push((y, p, prob));
    }
    Ok(SectorDecomposition { sectors })
}

/// Weak Schur sampling: draw a sector with probability `Tr(P_lambda Sigma)`
/// and return the normalised post-measurement state.
pub fn schur_sample<R: Rng + ?Sized>(
    sigma: &DensityOperator,
    rng: &mut R,
) -> Result<(YoungDiagram, DensityOperator)> {
    let dec = sector_decomposition(sigma)?;
    let total: f64 = dec.sectors.iter().map(|s| s.2).sum();
    if total <= 1e-14 {
        return Err(Error::Numerical("all sector probabilities vanish".into()));
    }
    let mut u = rng.random::<f64>() * total;
    let mut chosen = dec.sectors.len() - 1;
    for (i, s) in dec.sectors.iter().enumerate() {
        if s.2 <= 0.0 {
            continue;
        }
        chosen = i;
        if u < s.2 {
            break;
        }
        u -= s.2;
    }
    let (y, p, prob) = &dec.sectors[chosen];
    let post = p.as_ref() * sigma.matrix() * p.as_ref() / C64::new(*prob, 0.0);
    let state = DensityOperator::from_unnormalized(post, sigma.dims().to_vec())?;
    Ok((y.clone(), state))
}
