use crate::error::{Error, Result};
use crate::numerics::{linalg, Channel, CMatrix, CVector, C64};
use crate::schur::symmetric::{symmetric_basis, symmetric_dim};

/// Largest `dim^m` handled by the cloner.
pub const MAX_CLONER_DIM: usize = 4096;
/// Largest `dim^{2m}` for which the full Kraus family is materialised.
pub const MAX_CLONER_KRAUS_ENTRIES: usize = 1 << 22;

/// Optimal symmetric `n -> m` cloner on `C^dim`,
/// `X -> (D_n / D_m) P_sym^m (X (x) I) P_sym^m`, evaluated in Dicke
/// coordinates of the symmetric subspaces.
#[derive(Debug, Clone)]
pub struct SymmetricCloner {
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    scale: f64,
    e_n: CMatrix,
    e_m: CMatrix,
    /// `E_m^dagger (E_n (x) |j>)` for each basis state `j` of the extra copies.
    blocks: Vec<CMatrix>,
}

impl SymmetricCloner {
    pub fn new(n: usize, m: usize, dim: usize) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::InvalidParameter(format!("cloner needs 1 <= n <= m, got n={n} m={m}")));
        }
        if dim.checked_pow(m as u32).is_none_or(|x| x > MAX_CLONER_DIM) {
            return Err(Error::SizeLimit(format!("{dim}^{m} exceeds {MAX_CLONER_DIM}")));
        }
        let e_n = symmetric_basis(dim, n);
        let e_m = symmetric_basis(dim, m);
        let extra = dim.pow((m - n) as u32);
        let full_n = dim.pow(n as u32);
        let e_m_adj = e_m.adjoint();
        let blocks = (0..extra)
            .map(|j| {
                let gathered = CMatrix::from_fn(e_m.ncols(), full_n, |k, a| e_m_adj[(k, a * extra + j)]);
                gathered * &e_n
            })
            .collect();
        let scale = symmetric_dim(dim, n) as f64 / symmetric_dim(dim, m) as f64;
        Ok(Self { n, m, dim, scale, e_n, e_m, blocks })
    }

    pub fn input_basis(&self) -> &CMatrix {
        &self.e_n
    }

    pub fn output_basis(&self) -> &CMatrix {
        &self.e_m
    }

    /// Apply to an operator on `Sym^n` in Dicke coordinates; the result is
    /// in Dicke coordinates of `Sym^m`.
    pub fn apply_sym(&self, x: &CMatrix) -> Result<CMatrix> {
        let dn = self.e_n.ncols();
        if x.shape() != (dn, dn) {
            return Err(Error::DimensionMismatch(format!("expected {dn}x{dn} symmetric operator")));
        }
        let dm = self.e_m.ncols();
        let mut out = CMatrix::zeros(dm, dm);
        for b in &self.blocks {
            out += b * x * b.adjoint();
        }
        Ok(out * C64::new(self.scale, 0.0))
    }

    /// Output on `psi^{(x) n}` in Dicke coordinates of `Sym^m`.
    pub fn apply_product(&self, psi: &CVector) -> Result<CMatrix> {
        if psi.len() != self.dim {
            return Err(Error::DimensionMismatch("single-copy vector dimension".into()));
        }
        let v = self.e_n.adjoint() * linalg::kron_power_vec(psi, self.n);
        let dm = self.e_m.ncols();
        let mut out = CMatrix::zeros(dm, dm);
        for b in &self.blocks {
            let w = b * &v;
            out += &w * w.adjoint();
        }
        Ok(out * C64::new(self.scale, 0.0))
    }

    /// All-copy fidelity `<psi^{(x) m}| C(psi^{(x) n}) |psi^{(x) m}>`.
    pub fn all_site_fidelity(&self, psi: &CVector) -> Result<f64> {
        let out = self.apply_product(psi)?;
        let phi = self.e_m.adjoint() * linalg::kron_power_vec(psi, self.m);
        Ok((phi.adjoint() * out * phi)[(0, 0)].re)
    }

    /// Fidelity of each single-copy output marginal with `psi`.
    pub fn one_site_fidelities(&self, psi: &CVector) -> Result<Vec<f64>> {
        let out = self.apply_product(psi)?;
        let full = &self.e_m * out * self.e_m.adjoint();
        let dims = vec![self.dim; self.m];
        (0..self.m)
            .map(|i| {
                let marg = linalg::partial_trace(&full, &dims, &[i])?;
                Ok((psi.adjoint() * marg * psi)[(0, 0)].re)
            })
            .collect()
    }

    /// Full Kraus representation on `(C^dim)^{(x) n} -> (C^dim)^{(x) m}`,
    /// completed on the non-symmetric inputs by padding with `|0>` copies.
    pub fn channel(&self) -> Result<Channel> {
        let full_m = self.dim.pow(self.m as u32);
        if full_m.saturating_mul(full_m) > MAX_CLONER_KRAUS_ENTRIES {
            return Err(Error::SizeLimit(format!("full cloner channel on {full_m} output dimensions")));
        }
        let s = C64::new(self.scale.sqrt(), 0.0);
        let e_n_adj = self.e_n.adjoint();
        let mut kraus: Vec<CMatrix> = self.blocks.iter().map(|b| &self.e_m * b * &e_n_adj * s).collect();
        let full_n = self.dim.pow(self.n as u32);
        let q = linalg::identity(full_n) - &self.e_n * &e_n_adj;
        if q.camax() > 1e-12 {
            let extra = full_m / full_n;
            kraus.push(CMatrix::from_fn(full_m, full_n, |r, c| {
                if r % extra == 0 {
                    q[(r / extra, c)]
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
        Channel::from_kraus(kraus)
    }
}

/// Full-channel form of the optimal `n -> m` cloner on `C^dim`.
pub fn werner_cloner(n: usize, m: usize, dim: usize) -> Result<Channel> {
    SymmetricCloner::new(n, m, dim)?.channel()
}
