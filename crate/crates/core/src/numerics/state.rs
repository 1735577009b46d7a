use super::linalg::{self, eigh, hermiticity_defect, spectral_map};
use super::{CMatrix, CVector, C64, PSD_TOL, STATE_TOL};
use crate::error::{Error, Result};

/// Unit-trace positive semidefinite operator with a declared subsystem
/// factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Validate and wrap a matrix. Eigenvalues in `[-1e-10, 0)` are clamped
    /// to zero; anything more negative is rejected.
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if matrix.nrows() != d || matrix.ncols() != d || dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with subsystem dims {dims:?}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotNormalized(tr.re));
        }
        let (vals, vecs) = eigh(&matrix);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        let matrix = if min < 0.0 {
            spectral_map(&vals, &vecs, |x| C64::new(x.max(0.0), 0.0))
        } else {
            linalg::hermitian_part(&matrix)
        };
        Ok(Self { matrix, dims })
    }

    /// Like [`DensityOperator::new`] but first symmetrises and renormalises;
    /// meant for outputs of exact maps that only carry round-off.
    pub fn from_unnormalized(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr <= 0.0 {
            return Err(Error::NotNormalized(tr));
        }
        Self::new(linalg::hermitian_part(&matrix) / C64::new(tr, 0.0), dims)
    }

    pub fn single(matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(matrix, vec![d])
    }

    pub fn pure(psi: &CVector, dims: Vec<usize>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v = psi / C64::new(norm, 0.0);
        Self::new(linalg::projector(&v), dims)
    }

    pub fn pure_single(psi: &CVector) -> Result<Self> {
        Self::pure(psi, vec![psi.len()])
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let v = linalg::basis_ket(d, i);
        Self { matrix: linalg::projector(&v), dims: vec![d] }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: linalg::identity(d) / C64::new(d as f64, 0.0), dims: vec![d] }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Same matrix, new subsystem factorization (product must match).
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() {
            return Err(Error::DimensionMismatch(format!("dims {dims:?} for dimension {}", self.dim())));
        }
        self.dims = dims;
        Ok(self)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { matrix: linalg::kron(&self.matrix, &other.matrix), dims }
    }

    pub fn tensor_power(&self, n: usize) -> Self {
        let mut dims = Vec::with_capacity(self.dims.len() * n);
        for _ in 0..n {
            dims.extend_from_slice(&self.dims);
        }
        Self { matrix: linalg::kron_power(&self.matrix, n), dims }
    }

    /// Marginal on the kept subsystems (strictly increasing indices). An
    /// empty trace-out (all indices kept) returns the input unchanged.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = if keep.is_empty() { vec![1] } else { keep.iter().map(|&k| self.dims[k]).collect() };
        Ok(Self { matrix: m, dims })
    }

    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.dim() || u.nrows() != self.dim() {
            return Err(Error::DimensionMismatch("unitary conjugation".into()));
        }
        Ok(Self { matrix: u * &self.matrix * u.adjoint(), dims: self.dims.clone() })
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("mix".into()));
        }
        Ok(Self {
            matrix: &self.matrix * C64::new(w, 0.0) + &other.matrix * C64::new(1.0 - w, 0.0),
            dims: self.dims.clone(),
        })
    }
}

fn check_same(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    Ok(())
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`. For pure `rho`
/// this is the squared overlap `<psi|sigma|psi>`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same(rho, sigma)?;
    Ok(fidelity_matrices(rho.matrix(), sigma.matrix()))
}

pub(crate) fn fidelity_matrices(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let (vals, vecs) = eigh(rho);
    if vals[0] > 1.0 - 1e-12 {
        let psi = vecs.column(0);
        let f = (psi.adjoint() * sigma * psi)[(0, 0)].re;
        return f.clamp(0.0, 1.0);
    }
    let sqrt_rho = spectral_map(&vals, &vecs, |x| C64::new(x.max(0.0).sqrt(), 0.0));
    let inner = &sqrt_rho * sigma * &sqrt_rho;
    let s: f64 = linalg::eigvalsh(&inner).iter().map(|x| x.max(0.0).sqrt()).sum();
    (s * s).clamp(0.0, 1.0)
}

/// `(1/2) ||rho - sigma||_1`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same(rho, sigma)?;
    Ok(trace_distance_matrices(rho.matrix(), sigma.matrix()))
}

pub(crate) fn trace_distance_matrices(a: &CMatrix, b: &CMatrix) -> f64 {
    (0.5 * linalg::trace_norm_hermitian(&(a - b))).clamp(0.0, 1.0)
}

/// `U diag(p) U^dagger` for a descending probability vector `p`.
pub fn state_with_spectrum(p: &[f64], u: &CMatrix) -> Result<DensityOperator> {
    if p.is_empty() || u.nrows() != p.len() || u.ncols() != p.len() {
        return Err(Error::DimensionMismatch("spectrum and unitary sizes differ".into()));
    }
    if p.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(format!("spectrum {p:?} is not sorted descending")));
    }
    if p.iter().any(|&x| x < 0.0) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("spectrum {p:?} is not a probability vector")));
    }
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        p.len(),
        p.iter().map(|&x| C64::new(x, 0.0)),
    ));
    DensityOperator::single(u * diag * u.adjoint())
}
