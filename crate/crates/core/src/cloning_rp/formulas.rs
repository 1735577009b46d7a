use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schur::partitions::multiset_dim;

/// `n` copies of a rank-`r` state on `C^d`, `m` requested outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RpSpec {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub r: usize,
}

impl RpSpec {
    pub fn new(n: usize, m: usize, d: usize, r: usize) -> Result<Self> {
        if n == 0 || m == 0 || d == 0 || r == 0 || r > d {
            return Err(Error::InvalidParameter(format!(
                "need n, m >= 1 and 1 <= r <= d, got n={n} m={m} d={d} r={r}"
            )));
        }
        Ok(Self { n, m, d, r })
    }

    /// Dimension of one purified copy, `d r`.
    pub fn pur_dim(&self) -> usize {
        self.d * self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    All,
    One,
}

fn ratio(a: num_bigint::BigUint, b: num_bigint::BigUint) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// All-copy fidelity of purify-and-clone: `D_n / D_m` over `Sym(C^{dr})`,
/// or 1 when `n >= m`.
pub fn f_all_bound(spec: &RpSpec) -> BigRational {
    if spec.n >= spec.m {
        return BigRational::one();
    }
    ratio(multiset_dim(spec.pur_dim(), spec.n), multiset_dim(spec.pur_dim(), spec.m))
}

/// One-site fidelity `(n (m + dr) + m - n) / (m (n + dr))`, or 1 when `n >= m`.
pub fn f_one_bound(spec: &RpSpec) -> BigRational {
    if spec.n >= spec.m {
        return BigRational::one();
    }
    let (n, m, dr) = (spec.n, spec.m, spec.pur_dim());
    BigRational::new(BigInt::from(n * (m + dr) + m - n), BigInt::from(m * (n + dr)))
}

/// Optimal average losses of measure-and-prepare protocols on pure states:
/// all-site `1 - D_n / D_{n+m}`, one-site `(d - 1) / (n + 1)`.
pub fn eb_tomography_risk(n: usize, m: usize, d: usize, site: Site) -> Result<BigRational> {
    if n == 0 || m == 0 || d == 0 {
        return Err(Error::InvalidParameter("n, m, d must be positive".into()));
    }
    Ok(match site {
        Site::All => BigRational::one() - ratio(multiset_dim(d, n), multiset_dim(d, n + m)),
        Site::One => BigRational::new(BigInt::from(d - 1), BigInt::from(n + 1)),
    })
}

/// One-site infidelity of optimal pure-state estimation followed by
/// re-preparation, `(d - 1) / (n + d)`.
pub fn eb_estimation_one_site(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(d - 1), BigInt::from(n + d))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn one_minus(x: &BigRational) -> BigRational {
    BigRational::one() - x
}

pub fn is_nonnegative(x: &BigRational) -> bool {
    *x >= BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: usize, d: usize) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn spec(n: usize, m: usize, d: usize, r: usize) -> RpSpec {
        RpSpec::new(n, m, d, r).unwrap()
    }

    #[test]
    fn bound_examples() {
        assert_eq!(f_all_bound(&spec(3, 2, 2, 1)), BigRational::one());
        assert_eq!(f_one_bound(&spec(3, 3, 2, 2)), BigRational::one());
        assert_eq!(f_all_bound(&spec(1, 2, 2, 1)), rational(2, 3));
        assert_eq!(f_one_bound(&spec(1, 2, 2, 1)), rational(5, 6));
    }

    #[test]
    fn one_site_loss_closed_form() {
        for d in 1..4 {
            for r in 1..=d {
                for n in 1..6 {
                    for m in n + 1..9 {
                        let s = spec(n, m, d, r);
                        let dr = d * r;
                        let loss = one_minus(&f_one_bound(&s));
                        let expect = BigRational::new(
                            BigInt::from((dr - 1) * (m - n)),
                            BigInt::from(m * (n + dr)),
                        );
                        assert_eq!(loss, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn eb_examples() {
        assert_eq!(eb_tomography_risk(1, 1, 2, Site::One).unwrap(), rational(1, 2));
        assert_eq!(eb_tomography_risk(1, 1, 2, Site::All).unwrap(), rational(1, 3));
        let limit = to_f64(&eb_tomography_risk(200, 201, 2, Site::All).unwrap());
        assert!((limit - 0.5).abs() < 5e-3);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(RpSpec::new(1, 1, 2, 3).is_err());
        assert!(RpSpec::new(0, 1, 2, 1).is_err());
    }
}
