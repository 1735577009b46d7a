use nalgebra::DMatrix;

use super::partitions::{compose_permutations, cycle_count, invert_permutation, permutations};
use super::projectors::{permutation_index_map, MAX_PERMUTATION_FACTORS};
use crate::error::{Error, Result};
use crate::numerics::{linalg, CMatrix, C64};

/// Exact Haar twirl `E_U[(U^{(x) n} (x) I) X (U^{(x) n} (x) I)^dagger]` over
/// the listed factors, computed as the Hilbert-Schmidt projection onto
/// `span{U_pi} (x) B(rest)`. All twirled factors must share one dimension.
pub fn commutant_twirl(x: &CMatrix, dims: &[usize], twirled: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if x.nrows() != total || x.ncols() != total {
        return Err(Error::DimensionMismatch("twirl operand and subsystem dims".into()));
    }
    let n = twirled.len();
    if n == 0 {
        return Ok(x.clone());
    }
    if n > MAX_PERMUTATION_FACTORS {
        return Err(Error::SizeLimit(format!("twirl over {n} factors")));
    }
    let r = dims[twirled[0]];
    if twirled.iter().any(|&k| k >= dims.len() || dims[k] != r) {
        return Err(Error::InvalidSubsystems(format!("twirled factors {twirled:?} of {dims:?}")));
    }
    let mut sorted = twirled.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n {
        return Err(Error::InvalidSubsystems("repeated twirled factor".into()));
    }
    // Bring the twirled factors to the front.
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !twirled.contains(k)).collect();
    let order: Vec<usize> = twirled.iter().chain(&rest).copied().collect();
    let xf = linalg::permute_subsystems(x, dims, &order)?;
    let big = r.pow(n as u32);
    let small = total / big;

    let perms = permutations(n);
    let maps: Vec<Vec<usize>> = perms.iter().map(|p| permutation_index_map(p, r)).collect();
    let np = perms.len();
    let gram = DMatrix::<f64>::from_fn(np, np, |a, b| {
        let c = compose_permutations(&invert_permutation(&perms[a]), &perms[b]);
        (r as f64).powi(cycle_count(&c) as i32)
    });
    let ginv = gram
        .clone()
        .pseudo_inverse(1e-9)
        .map_err(|e| Error::Numerical(format!("Gram pseudo-inverse: {e}")))?;

    // Y_tau = Tr_twirled[(U_tau^dagger (x) I) X].
    let ys: Vec<CMatrix> = maps
        .iter()
        .map(|map| {
            let mut y = CMatrix::zeros(small, small);
            for (a, &ma) in map.iter().enumerate() {
                for s in 0..small {
                    for t in 0..small {
                        y[(s, t)] += xf[(ma * small + s, a * small + t)];
                    }
                }
            }
            y
        })
        .collect();
    let mut out = CMatrix::zeros(total, total);
    for (p, map) in maps.iter().enumerate() {
        let mut z = CMatrix::zeros(small, small);
        for (t, y) in ys.iter().enumerate() {
            let g = ginv[(p, t)];
            if g != 0.0 {
                z += y * C64::new(g, 0.0);
            }
        }
        for (a, &ma) in map.iter().enumerate() {
            for s in 0..small {
                for t in 0..small {
                    out[(ma * small + s, a * small + t)] += z[(s, t)];
                }
            }
        }
    }
    let mut inverse = vec![0usize; order.len()];
    for (j, &o) in order.iter().enumerate() {
        inverse[o] = j;
    }
    let front_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    linalg::permute_subsystems(&out, &front_dims, &inverse)
}
