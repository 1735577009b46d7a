//! Dense complex linear algebra on `nalgebra` matrices.
//!
//! Multi-partite operators use row-major mixed-radix indexing: for
//! subsystem dimensions `[d_0, d_1, ..., d_{k-1}]` the basis index of
//! `|i_0 i_1 ... i_{k-1}>` is `((i_0 d_1 + i_1) d_2 + i_2) ...`, which is the
//! ordering produced by repeated Kronecker products.

use nalgebra::SymmetricEigen;

use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Computational basis vector `|i>` in dimension `d`.
pub fn basis_ket(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = C64::new(1.0, 0.0);
    v
}

pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

pub fn projector(v: &CVector) -> CMatrix {
    outer(v, v)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

pub fn kron_all<'a, I>(factors: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    let mut acc = CMatrix::identity(1, 1);
    for f in factors {
        acc = acc.kronecker(f);
    }
    acc
}

pub fn kron_power(a: &CMatrix, n: usize) -> CMatrix {
    let mut acc = CMatrix::identity(1, 1);
    for _ in 0..n {
        acc = acc.kronecker(a);
    }
    acc
}

pub fn kron_power_vec(v: &CVector, n: usize) -> CVector {
    let mut acc = CVector::from_element(1, C64::new(1.0, 0.0));
    for _ in 0..n {
        acc = acc.kronecker(v);
    }
    acc
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// Largest entry-wise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// The matrix is symmetrised first; callers are responsible for checking
/// Hermiticity when it matters.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitian_part(m);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), m.ncols());
    for (new, &old) in order.iter().enumerate() {
        vectors.set_column(new, &eig.eigenvectors.column(old));
    }
    (values, vectors)
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    eigh(m).0
}

/// Rebuild `V diag(f(lambda)) V^dagger` from an eigendecomposition.
pub fn spectral_map(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let d = vectors.nrows();
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        let fj = f(lam);
        for i in 0..d {
            scaled[(i, j)] *= fj;
        }
    }
    scaled * vectors.adjoint()
}

/// Square root of a positive semidefinite matrix; negative round-off is
/// clamped to zero.
pub fn sqrt_psd(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(m);
    spectral_map(&vals, &vecs, |x| C64::new(x.max(0.0).sqrt(), 0.0))
}

/// Schatten-1 norm of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &CMatrix) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).sum()
}

/// Schatten-1 norm of an arbitrary square matrix (sum of singular values).
pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |a, &b| a.max(b))
}

/// `exp(-i H t)` for Hermitian `H`, computed from the eigendecomposition.
pub fn herm_exp(h: &CMatrix, t: f64) -> Result<CMatrix> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch("herm_exp needs a square matrix".into()));
    }
    let defect = hermiticity_defect(h);
    if defect > 1e-10 * (1.0 + max_abs_entry(h)) {
        return Err(Error::NotHermitian(defect));
    }
    let (vals, vecs) = eigh(h);
    Ok(spectral_map(&vals, &vecs, |x| C64::from_polar(1.0, -x * t)))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Offsets (into the full index) of every multi-index over the given
/// subsystems, enumerated in row-major order of those subsystems.
fn subsystem_offsets(dims: &[usize], which: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut offsets = vec![0usize];
    for &k in which {
        let mut next = Vec::with_capacity(offsets.len() * dims[k]);
        for &o in &offsets {
            for i in 0..dims[k] {
                next.push(o + i * st[k]);
            }
        }
        offsets = next;
    }
    offsets
}

fn check_subsystems(dims: &[usize], keep: &[usize]) -> Result<()> {
    for w in keep.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidSubsystems(format!(
                "indices must be strictly increasing, got {keep:?}"
            )));
        }
    }
    if let Some(&last) = keep.last() {
        if last >= dims.len() {
            return Err(Error::InvalidSubsystems(format!(
                "index {last} out of range for {} subsystems",
                dims.len()
            )));
        }
    }
    Ok(())
}

/// Partial trace keeping the listed subsystems (strictly increasing).
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, subsystems {dims:?} give {total}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_subsystems(dims, keep)?;
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let keep_off = subsystem_offsets(dims, keep);
    let trace_off = subsystem_offsets(dims, &traced);
    let dk = keep_off.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (a, &oa) in keep_off.iter().enumerate() {
        for (b, &ob) in keep_off.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &r in &trace_off {
                acc += m[(oa + r, ob + r)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Reorder tensor factors: output factor `j` is input factor `order[j]`.
pub fn permute_subsystems(m: &CMatrix, dims: &[usize], order: &[usize]) -> Result<CMatrix> {
    let map = subsystem_permutation_map(dims, order)?;
    let n = map.len();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch("permute_subsystems".into()));
    }
    Ok(CMatrix::from_fn(n, n, |a, b| m[(map[a], map[b])]))
}

pub fn permute_subsystems_vec(v: &CVector, dims: &[usize], order: &[usize]) -> Result<CVector> {
    let map = subsystem_permutation_map(dims, order)?;
    if v.len() != map.len() {
        return Err(Error::DimensionMismatch("permute_subsystems_vec".into()));
    }
    Ok(CVector::from_fn(map.len(), |a, _| v[map[a]]))
}

/// For each index of the reordered space, the index in the original space.
pub fn subsystem_permutation_map(dims: &[usize], order: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() {
        return Err(Error::InvalidSubsystems(format!("order {order:?} for dims {dims:?}")));
    }
    for &o in order {
        if o >= dims.len() || seen[o] {
            return Err(Error::InvalidSubsystems(format!("order {order:?} is not a permutation")));
        }
        seen[o] = true;
    }
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let old_st = strides(dims);
    let total: usize = dims.iter().product();
    let mut map = vec![0usize; total];
    let mut digits = vec![0usize; dims.len()];
    for (idx, slot) in map.iter_mut().enumerate() {
        let mut rem = idx;
        for j in (0..new_dims.len()).rev() {
            digits[j] = rem % new_dims[j];
            rem /= new_dims[j];
        }
        *slot = order
            .iter()
            .zip(&digits)
            .map(|(&o, &dg)| dg * old_st[o])
            .sum();
    }
    Ok(map)
}

/// Partial transpose on the listed subsystems.
pub fn partial_transpose(m: &CMatrix, dims: &[usize], which: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::DimensionMismatch("partial_transpose".into()));
    }
    let st = strides(dims);
    let digit = |idx: usize, k: usize| (idx / st[k]) % dims[k];
    Ok(CMatrix::from_fn(total, total, |a, b| {
        let (mut aa, mut bb) = (a, b);
        for &k in which {
            let (da, db) = (digit(a, k), digit(b, k));
            aa = aa - da * st[k] + db * st[k];
            bb = bb - db * st[k] + da * st[k];
        }
        m[(aa, bb)]
    }))
}

/// Apply a single-site operator to factor `site` of a vector on `dims`.
pub fn apply_local(v: &CVector, dims: &[usize], site: usize, op: &CMatrix) -> CVector {
    let st = strides(dims);
    let d = dims[site];
    let mut out = CVector::zeros(v.len());
    for idx in 0..v.len() {
        let digit = (idx / st[site]) % d;
        let base = idx - digit * st[site];
        let amp = v[idx];
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        for row in 0..d {
            out[base + row * st[site]] += op[(row, digit)] * amp;
        }
    }
    out
}

/// `(U ⊗ U ⊗ ... ⊗ U) v` for `v` on `n` copies of `C^d`.
pub fn apply_tensor_power(v: &CVector, u: &CMatrix, n: usize) -> CVector {
    let d = u.nrows();
    let dims = vec![d; n];
    let mut out = v.clone();
    for site in 0..n {
        out = apply_local(&out, &dims, site, u);
    }
    out
}

/// Determinant of the leading `k x k` principal block.
pub fn leading_minor(m: &CMatrix, k: usize) -> C64 {
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    m.view((0, 0), (k, k)).into_owned().determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    #[test]
    fn herm_exp_at_zero_is_identity() {
        let u = herm_exp(&pauli_z(), 0.0).unwrap();
        assert!((u - identity(2)).norm() < 1e-14);
    }

    #[test]
    fn herm_exp_of_z_at_pi() {
        let u = herm_exp(&pauli_z(), std::f64::consts::PI).unwrap();
        let expect = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::from_polar(1.0, -std::f64::consts::PI),
            C64::from_polar(1.0, std::f64::consts::PI),
        ]));
        assert!((&u - expect).norm() < 1e-12);
        assert!((u + identity(2)).norm() < 1e-12);
    }

    #[test]
    fn herm_exp_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(herm_exp(&m, 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn partial_trace_of_product() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.7, 0.), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.)]);
        let b = CMatrix::from_row_slice(3, 3, &[
            c(0.5, 0.), c(0., 0.), c(0., 0.),
            c(0., 0.), c(0.25, 0.), c(0., 0.),
            c(0., 0.), c(0., 0.), c(0.25, 0.),
        ]);
        let ab = kron(&a, &b);
        assert!((partial_trace(&ab, &[2, 3], &[0]).unwrap() - &a).norm() < 1e-15);
        assert!((partial_trace(&ab, &[2, 3], &[1]).unwrap() - &b).norm() < 1e-15);
        assert!((partial_trace(&ab, &[2, 3], &[0, 1]).unwrap() - &ab).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let m = identity(4);
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[1, 0]).is_err());
    }

    #[test]
    fn permute_subsystems_swaps_factors() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(2., 0.), c(3., 0.), c(4., 0.)]);
        let b = CMatrix::from_row_slice(3, 3, &(0..9).map(|x| c(x as f64, 1.0)).collect::<Vec<_>>());
        let ab = kron(&a, &b);
        let ba = permute_subsystems(&ab, &[2, 3], &[1, 0]).unwrap();
        assert!((ba - kron(&b, &a)).norm() < 1e-14);
    }

    #[test]
    fn partial_transpose_of_product() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(2., 1.), c(3., 0.), c(4., 0.)]);
        let b = CMatrix::from_row_slice(2, 2, &[c(0., 1.), c(5., 0.), c(6., 0.), c(7., 0.)]);
        let pt = partial_transpose(&kron(&a, &b), &[2, 2], &[0]).unwrap();
        assert!((pt - kron(&a.transpose(), &b)).norm() < 1e-14);
    }

    #[test]
    fn apply_tensor_power_matches_kron() {
        let u = CMatrix::from_row_slice(2, 2, &[c(0.6, 0.), c(0., 0.8), c(0., 0.8), c(0.6, 0.)]);
        let v = CVector::from_fn(8, |i, _| c(i as f64, -(i as f64) / 2.0));
        let direct = kron_power(&u, 3) * &v;
        assert!((apply_tensor_power(&v, &u, 3) - direct).norm() < 1e-12);
    }
}
