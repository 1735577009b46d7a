use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::partitions::{factorial, permutations, permutation_sign, YoungDiagram};
use super::projectors::permutation_index_map;
use crate::error::{Error, Result};
use crate::numerics::{CVector, C64};

/// Occupation vector of computational basis index `idx` of `(C^d)^{(x) n}`.
pub fn type_of_index(idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut tau = vec![0usize; d];
    let mut rem = idx;
    for _ in 0..n {
        tau[rem % d] += 1;
        rem /= d;
    }
    tau
}

/// Common occupation vector of all basis components above `tol`, or `None`
/// when the vector mixes weights.
pub fn weight_of(v: &CVector, d: usize, n: usize, tol: f64) -> Option<Vec<usize>> {
    let mut found: Option<Vec<usize>> = None;
    for (idx, a) in v.iter().enumerate() {
        if a.norm() <= tol {
            continue;
        }
        let t = type_of_index(idx, d, n);
        match &found {
            None => found = Some(t),
            Some(f) if *f != t => return None,
            _ => {}
        }
    }
    found
}

/// Young-symmetrised lowest-weight vector of the sector `lambda`.
///
/// Boxes of row `i` of the row-reading tableau carry level `d - 1 - i`; the
/// column antisymmetriser is applied to that tensor (the row symmetriser
/// fixes it). The occupation of level `j` is `lambda_{d-1-j}`.
pub fn lowest_weight_vector(lambda: &YoungDiagram) -> Result<CVector> {
    let d = lambda.d();
    let n = lambda.n();
    let rows = lambda.rows();
    let mut level = Vec::with_capacity(n);
    for (i, &r) in rows.iter().enumerate() {
        level.extend(std::iter::repeat_n(d - 1 - i, r));
    }
    // Columns of the tableau as lists of tensor positions.
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); rows.first().copied().unwrap_or(0)];
    let mut pos = 0;
    for &r in rows {
        for (j, col) in columns.iter_mut().enumerate().take(r) {
            col.push(pos + j);
        }
        pos += r;
    }
    let mut stride = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        stride[k] = stride[k + 1] * d;
    }
    let mut v = CVector::zeros(d.pow(n as u32));
    // Antisymmetrise each column independently: product over columns of
    // signed permutations of its entries.
    let mut terms: Vec<(Vec<usize>, i64)> = vec![(level.clone(), 1)];
    for col in &columns {
        let mut next = Vec::new();
        for (lv, sign) in &terms {
            for p in permutations(col.len()) {
                let mut out = lv.clone();
                for (a, &b) in p.iter().enumerate() {
                    out[col[b]] = lv[col[a]];
                }
                next.push((out, sign * permutation_sign(&p)));
            }
        }
        terms = next;
    }
    for (lv, sign) in terms {
        let idx: usize = lv.iter().zip(&stride).map(|(l, s)| l * s).sum();
        v[idx] += C64::new(sign as f64, 0.0);
    }
    let norm = v.norm();
    if norm < 1e-12 {
        return Err(Error::Numerical(format!("Young symmetriser annihilated {lambda}")));
    }
    Ok(v / C64::new(norm, 0.0))
}

/// Apply `P_sigma^{(x) n}` with `P_sigma |i> = |sigma(i)>` to a vector of
/// definite weight `tau`. Returns the image and its weight `sigma(tau)`.
pub fn type_permutation_action(sigma: &[usize], v: &CVector, d: usize) -> Result<(CVector, Vec<usize>)> {
    if sigma.len() != d {
        return Err(Error::DimensionMismatch(format!("permutation of {} levels for d = {d}", sigma.len())));
    }
    let n = tensor_power_of(v.len(), d)?;
    let tau = weight_of(v, d, n, 1e-12)
        .ok_or_else(|| Error::InvalidParameter("vector has no definite weight".into()))?;
    let mut out = CVector::zeros(v.len());
    for (idx, a) in v.iter().enumerate() {
        let mut rem = idx;
        let mut digits = vec![0usize; n];
        for k in (0..n).rev() {
            digits[k] = rem % d;
            rem /= d;
        }
        let j = digits.iter().fold(0usize, |acc, &x| acc * d + sigma[x]);
        out[j] += *a;
    }
    let mut new_tau = vec![0usize; d];
    for (i, &t) in tau.iter().enumerate() {
        new_tau[sigma[i]] = t;
    }
    Ok((out, new_tau))
}

/// Highest-weight partner of [`lowest_weight_vector`]: level `j` occupied
/// `lambda_j` times, obtained by reversing the levels.
pub fn highest_weight_vector(lambda: &YoungDiagram) -> Result<CVector> {
    let d = lambda.d();
    let lw = lowest_weight_vector(lambda)?;
    let rev: Vec<usize> = (0..d).rev().collect();
    Ok(type_permutation_action(&rev, &lw, d)?.0)
}

fn tensor_power_of(len: usize, d: usize) -> Result<usize> {
    let mut n = 0;
    let mut acc = 1usize;
    while acc < len {
        acc *= d;
        n += 1;
    }
    if acc != len || (d == 1 && len != 1) {
        return Err(Error::DimensionMismatch(format!("length {len} is not a power of {d}")));
    }
    Ok(n)
}

/// Apply a factor permutation of the tensor product to a vector.
pub fn permute_factors(v: &CVector, perm: &[usize], d: usize) -> CVector {
    let map = permutation_index_map(perm, d);
    let mut out = CVector::zeros(v.len());
    for (i, &j) in map.iter().enumerate() {
        out[j] = v[i];
    }
    out
}

/// Closed-form ratio `d[varsigma] / d[alpha]` with `alpha` obtained by
/// deleting row `k` (1-based) of `varsigma`.
pub fn dimension_ratio(varsigma: &YoungDiagram, k: usize) -> Result<BigRational> {
    let d = varsigma.d();
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("row index {k} outside 1..={d}")));
    }
    let gap = |i: usize, j: usize| -> i64 { varsigma.gap(i - 1, j - 1) };
    let int = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut acc = BigRational::one() / BigRational::from_integer(BigInt::from(factorial(d - 1)));
    for i in 1..k {
        acc *= int(gap(i, k) + (k - i) as i64);
    }
    for j in k + 1..=d {
        acc *= int(gap(k, j) - k as i64 + j as i64);
    }
    for i in 1..k {
        for j in k + 1..=d {
            let a = gap(i, j) - i as i64 + j as i64;
            acc *= int(a) / int(a - 1);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::{self, c};
    use crate::numerics::random::{random_permutation, seeded_rng};
    use crate::schur::partitions::diagrams;
    use crate::schur::projectors::isotypic_projector;
    use num_bigint::BigUint;
    use proptest::prelude::*;
    use rand::Rng;

    fn torus_phase_check(v: &CVector, d: usize, n: usize, tau: &[usize], seed: u64) {
        let mut rng = seeded_rng(seed);
        let theta: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 6.0).collect();
        let diag = crate::numerics::CMatrix::from_diagonal(&CVector::from_iterator(
            d,
            theta.iter().map(|&t| C64::from_polar(1.0, t)),
        ));
        let out = linalg::apply_tensor_power(v, &diag, n);
        let phase: f64 = tau.iter().zip(&theta).map(|(&t, th)| t as f64 * th).sum();
        assert!((out - v * C64::from_polar(1.0, phase)).camax() < 1e-10);
    }

    #[test]
    fn lowest_weight_examples() {
        let y = YoungDiagram::new(vec![3], 2).unwrap();
        let v = lowest_weight_vector(&y).unwrap();
        assert!((v[7] - c(1., 0.)).norm() < 1e-12);
        let y = YoungDiagram::new(vec![1, 1], 2).unwrap();
        let v = lowest_weight_vector(&y).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let overlap = v[1] * s - v[2] * s;
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lowest_weight_lies_in_sector_with_reversed_weight() {
        for d in 1..=3 {
            for n in 1..=4 {
                for y in diagrams(n, d) {
                    let v = lowest_weight_vector(&y).unwrap();
                    let p = isotypic_projector(y.rows(), d).unwrap().matrix;
                    assert!((p.as_ref() * &v - &v).camax() < 1e-10, "{y}");
                    let mut tau = y.padded();
                    tau.reverse();
                    assert_eq!(weight_of(&v, d, n, 1e-12).unwrap(), tau);
                    torus_phase_check(&v, d, n, &tau, n as u64);
                }
            }
        }
    }

    #[test]
    fn highest_weight_has_partition_weight() {
        let y = YoungDiagram::new(vec![2, 1], 3).unwrap();
        let v = highest_weight_vector(&y).unwrap();
        assert_eq!(weight_of(&v, 3, 3, 1e-12).unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn swap_on_singlet_is_sign() {
        let y = YoungDiagram::new(vec![1, 1], 2).unwrap();
        let v = lowest_weight_vector(&y).unwrap();
        let (w, tau) = type_permutation_action(&[1, 0], &v, 2).unwrap();
        assert!((w + &v).camax() < 1e-12);
        assert_eq!(tau, vec![1, 1]);
        let (same, _) = type_permutation_action(&[0, 1], &v, 2).unwrap();
        assert!((same - v).camax() < 1e-15);
    }

    #[test]
    fn permutation_action_rejects_mixed_weight() {
        let v = CVector::from_vec(vec![c(1., 0.), c(1., 0.)]);
        assert!(type_permutation_action(&[1, 0], &v, 2).is_err());
    }

    #[test]
    fn random_level_permutations_move_weights() {
        let mut rng = seeded_rng(12);
        let y = YoungDiagram::new(vec![2, 1, 1], 3).unwrap();
        let v = lowest_weight_vector(&y).unwrap();
        for s in 0..10 {
            let sigma = random_permutation(3, &mut rng);
            let (w, tau) = type_permutation_action(&sigma, &v, 3).unwrap();
            torus_phase_check(&w, 3, 4, &tau, s);
        }
    }

    #[test]
    fn dimension_ratio_examples() {
        let y = YoungDiagram::new(vec![5], 2).unwrap();
        assert_eq!(dimension_ratio(&y, 1).unwrap(), BigRational::from_integer(6.into()));
        let y = YoungDiagram::new(vec![2, 1], 2).unwrap();
        assert_eq!(dimension_ratio(&y, 1).unwrap(), BigRational::from_integer(2.into()));
        assert!(dimension_ratio(&y, 3).is_err());
    }

    #[test]
    fn dimension_ratio_matches_quotient_exhaustively() {
        for d in 2..=4 {
            for n in 0..=6 {
                for y in diagrams(n, d) {
                    for k in 1..=d {
                        let alpha = y.delete_row(k - 1).unwrap();
                        let num = BigInt::from(y.weyl_dim());
                        let den = BigInt::from(alpha.weyl_dim());
                        assert_ne!(den, BigInt::from(BigUint::from(0u32)));
                        assert_eq!(dimension_ratio(&y, k).unwrap(), BigRational::new(num, den), "{y} k={k}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn dimension_ratio_identity(rows in proptest::collection::vec(0usize..8, 1..5), k in 1usize..5) {
            let mut rows = rows;
            rows.sort_unstable_by(|a, b| b.cmp(a));
            let d = rows.len().max(k);
            let y = YoungDiagram::new(rows, d).unwrap();
            let alpha = y.delete_row(k - 1).unwrap();
            let q = BigRational::new(BigInt::from(y.weyl_dim()), BigInt::from(alpha.weyl_dim()));
            prop_assert_eq!(dimension_ratio(&y, k).unwrap(), q);
        }
    }
}
