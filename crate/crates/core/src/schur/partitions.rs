use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Integer partition with at most `d` rows, labelling a sector of
/// `(C^d)^{(x) n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    rows: Vec<usize>,
    d: usize,
}

impl YoungDiagram {
    /// Rows must be weakly decreasing; trailing zeros are dropped.
    pub fn new(rows: Vec<usize>, d: usize) -> Result<Self> {
        let rows = normalize_partition(rows)?;
        if rows.len() > d {
            return Err(Error::InvalidParameter(format!("{rows:?} has more than {d} rows")));
        }
        Ok(Self { rows, d })
    }

    /// Nonzero rows.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Rows padded with zeros to length `d`.
    pub fn padded(&self) -> Vec<usize> {
        let mut r = self.rows.clone();
        r.resize(self.d, 0);
        r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Row `i` (0-based), zero beyond the last nonzero row.
    pub fn row(&self, i: usize) -> usize {
        self.rows.get(i).copied().unwrap_or(0)
    }

    /// Row gap `varsigma_i - varsigma_j` (0-based indices).
    pub fn gap(&self, i: usize, j: usize) -> i64 {
        self.row(i) as i64 - self.row(j) as i64
    }

    /// Delete row `k` (0-based) and close up; the result lives in `d - 1`.
    pub fn delete_row(&self, k: usize) -> Result<Self> {
        if k >= self.d {
            return Err(Error::InvalidParameter(format!("row {k} out of range for d = {}", self.d)));
        }
        let mut r = self.padded();
        r.remove(k);
        Self::new(r, self.d - 1)
    }

    /// Sn irrep dimension from the hook-length formula.
    pub fn sn_dim(&self) -> BigUint {
        sn_dim(&self.rows)
    }

    /// U(d) irrep dimension.
    pub fn weyl_dim(&self) -> BigUint {
        weyl_dim(&self.rows, self.d)
    }
}

impl std::fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn normalize_partition(mut rows: Vec<usize>) -> Result<Vec<usize>> {
    while rows.last() == Some(&0) {
        rows.pop();
    }
    if rows.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(format!("{rows:?} is not weakly decreasing")));
    }
    Ok(rows)
}

/// All partitions of `n` in decreasing lexicographic order, starting at `(n)`.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            rec(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Young diagrams of `n` boxes with at most `d` rows, in the order of
/// [`partitions`].
pub fn diagrams(n: usize, d: usize) -> Vec<YoungDiagram> {
    partitions(n)
        .into_iter()
        .filter(|p| p.len() <= d)
        .map(|rows| YoungDiagram { rows, d })
        .collect()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Dimension of the symmetric subspace of `(C^d)^{(x) n}`.
pub fn multiset_dim(d: usize, n: usize) -> BigUint {
    if d == 0 {
        return BigUint::from(u32::from(n == 0));
    }
    binomial(n + d - 1, d - 1)
}

/// Product of hook lengths.
pub fn hook_product(lambda: &[usize]) -> BigUint {
    let mut acc = BigUint::one();
    for (i, &row) in lambda.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = lambda[i + 1..].iter().filter(|&&r| r > j).count();
            acc *= BigUint::from(arm + leg + 1);
        }
    }
    acc
}

pub fn sn_dim(lambda: &[usize]) -> BigUint {
    let n: usize = lambda.iter().sum();
    factorial(n) / hook_product(lambda)
}

/// Weyl dimension `prod_{i<j} (lambda_i - lambda_j + j - i) / (j - i)`.
/// Zero when `lambda` has more than `d` rows.
pub fn weyl_dim(lambda: &[usize], d: usize) -> BigUint {
    if lambda.iter().filter(|&&r| r > 0).count() > d {
        return BigUint::from(0u32);
    }
    let row = |i: usize| lambda.get(i).copied().unwrap_or(0) as i64;
    let mut acc = BigRational::one();
    for i in 0..d {
        for j in i + 1..d {
            let num = row(i) - row(j) + (j - i) as i64;
            acc *= BigRational::new(num.into(), ((j - i) as i64).into());
        }
    }
    acc.to_integer().to_biguint().expect("Weyl dimension is positive")
}

/// Murnaghan-Nakayama evaluation of the Sn character `chi_lambda(mu)`.
pub fn sn_character(lambda: &[usize], mu: &[usize]) -> Result<i64> {
    let n: usize = lambda.iter().sum();
    let m: usize = mu.iter().sum();
    if n != m {
        return Err(Error::InvalidParameter(format!("character of a partition of {n} at a class of {m}")));
    }
    let lambda = normalize_partition(lambda.to_vec())?;
    let mut mu: Vec<usize> = mu.iter().copied().filter(|&x| x > 0).collect();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &l)| l + len - 1 - i).collect();
    let mut memo = HashMap::new();
    Ok(mn_rec(beta, &mu, &mut memo))
}

/// Beta-set recursion: removing a rim hook of length `r` moves one bead
/// from `b` to the free position `b - r`; the sign counts beads jumped over.
fn mn_rec(beta: Vec<usize>, mu: &[usize], memo: &mut HashMap<(Vec<usize>, usize), i64>) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (beta.clone(), mu.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = mu[0];
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[idx] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * mn_rec(next, &mu[1..], memo);
    }
    memo.insert(key, total);
    total
}

/// Cycle type of a permutation in one-line notation, sorted descending.
pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

pub fn cycle_count(perm: &[usize]) -> usize {
    cycle_type(perm).len()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// `(a . b)(i) = a(b(i))`.
pub fn compose_permutations(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn permutation_sign(perm: &[usize]) -> i64 {
    if (perm.len() - cycle_count(perm)).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Schur polynomial `s_lambda(x)` from the Jacobi-Trudi determinant
/// `det[h_{lambda_i - i + j}]` in complete homogeneous polynomials.
pub fn schur_polynomial(lambda: &[usize], x: &[f64]) -> f64 {
    let rows: Vec<usize> = lambda.iter().copied().filter(|&r| r > 0).collect();
    if rows.is_empty() {
        return 1.0;
    }
    if rows.len() > x.len() {
        return 0.0;
    }
    let top = rows[0] + rows.len();
    // h[k] over the variables seen so far.
    let mut h = vec![0.0; top + 1];
    h[0] = 1.0;
    for &xi in x {
        for k in 1..=top {
            h[k] += xi * h[k - 1];
        }
    }
    let l = rows.len();
    let m = nalgebra::DMatrix::from_fn(l, l, |i, j| {
        let idx = rows[i] as i64 - i as i64 + j as i64;
        if idx < 0 {
            0.0
        } else {
            h[idx as usize]
        }
    });
    m.determinant()
}

/// Weak Schur sampling distribution of `rho^{(x) n}` for a state with
/// spectrum `p`: `Pr(lambda) = dim(lambda) s_lambda(p)`.
pub fn sector_probabilities(p: &[f64], n: usize) -> Vec<(YoungDiagram, f64)> {
    diagrams(n, p.len())
        .into_iter()
        .map(|y| {
            let prob = to_f64(&y.sn_dim()) * schur_polynomial(y.rows(), p);
            (y, prob)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn schur_polynomial_examples() {
        // s_(2,1)(x, y) = x^2 y + x y^2
        let (x, y) = (0.3, 0.7);
        assert!((schur_polynomial(&[2, 1], &[x, y]) - (x * x * y + x * y * y)).abs() < 1e-15);
        assert_eq!(schur_polynomial(&[1, 1, 1], &[0.5, 0.5]), 0.0);
        assert_eq!(schur_polynomial(&[], &[0.5, 0.5]), 1.0);
    }

    #[test]
    fn sector_probabilities_sum_to_one() {
        for (p, n) in [(vec![0.8, 0.2], 40), (vec![0.5, 0.3, 0.2], 12), (vec![1.0, 0.0], 7)] {
            let total: f64 = sector_probabilities(&p, n).iter().map(|s| s.1).sum();
            assert!((total - 1.0).abs() < 1e-9, "{p:?} {n}: {total}");
        }
    }

    #[test]
    fn multiset_examples() {
        assert_eq!(multiset_dim(2, 2), BigUint::from(3u32));
        assert_eq!(multiset_dim(5, 0), BigUint::from(1u32));
        assert_eq!(multiset_dim(4, 3), BigUint::from(20u32));
    }

    #[test]
    fn character_examples() {
        for mu in partitions(4) {
            assert_eq!(sn_character(&[4], &mu).unwrap(), 1);
        }
        assert_eq!(sn_character(&[1, 1], &[2]).unwrap(), -1);
        assert_eq!(sn_character(&[2, 1], &[1, 1, 1]).unwrap(), 2);
        assert_eq!(sn_character(&[2, 1], &[3]).unwrap(), -1);
        assert_eq!(sn_character(&[2, 2], &[2, 2]).unwrap(), 2);
        assert!(sn_character(&[2, 1], &[2]).is_err());
    }

    #[test]
    fn column_orthogonality_in_s5() {
        // sum_lambda chi(mu) chi(nu) = delta * centraliser size.
        let ps = partitions(5);
        let centraliser = |mu: &[usize]| -> u64 {
            let mut acc = 1u64;
            for k in 1..=5 {
                let m = mu.iter().filter(|&&x| x == k).count() as u64;
                acc *= (k as u64).pow(m as u32) * (1..=m).product::<u64>();
            }
            acc
        };
        for mu in &ps {
            for nu in &ps {
                let s: i64 = ps
                    .iter()
                    .map(|l| sn_character(l, mu).unwrap() * sn_character(l, nu).unwrap())
                    .sum();
                let expect = if mu == nu { centraliser(mu) as i64 } else { 0 };
                assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(weyl_dim(&[5], 2), BigUint::from(6u32));
        assert_eq!(weyl_dim(&[1, 1], 2), BigUint::from(1u32));
        assert_eq!(weyl_dim(&[2, 1], 3), BigUint::from(8u32));
        assert_eq!(weyl_dim(&[1, 1, 1], 2), BigUint::from(0u32));
    }

    #[test]
    fn schur_weyl_dimension_count() {
        for d in 1..=4 {
            for n in 0..=6 {
                let total: BigUint = diagrams(n, d).iter().map(|y| y.weyl_dim() * y.sn_dim()).sum();
                assert_eq!(total, BigUint::from(d).pow(n as u32));
            }
        }
    }

    #[test]
    fn partition_order_and_count() {
        let p = partitions(4);
        assert_eq!(p, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(10).len(), 42);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn diagram_validation() {
        assert!(YoungDiagram::new(vec![1, 2], 3).is_err());
        assert!(YoungDiagram::new(vec![1, 1, 1], 2).is_err());
        let y = YoungDiagram::new(vec![3, 1, 0], 3).unwrap();
        assert_eq!(y.rows(), &[3, 1]);
        assert_eq!(y.padded(), vec![3, 1, 0]);
        assert_eq!(y.gap(0, 2), 3);
    }

    proptest! {
        #[test]
        fn row_gaps_are_nonnegative(n in 0usize..12, d in 1usize..5) {
            for y in diagrams(n, d) {
                for i in 0..d {
                    for j in i + 1..d {
                        prop_assert!(y.gap(i, j) >= 0);
                    }
                }
            }
        }

        #[test]
        fn character_at_identity_is_dimension(n in 1usize..9) {
            for l in partitions(n) {
                let ident = vec![1; n];
                let chi = sn_character(&l, &ident).unwrap();
                prop_assert_eq!(BigUint::from(chi as u64), sn_dim(&l));
            }
        }
    }
}
