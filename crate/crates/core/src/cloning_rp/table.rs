use serde::{Deserialize, Serialize};

use super::cloner::{SymmetricCloner, MAX_CLONER_DIM};
use super::formulas::{eb_tomography_risk, f_one_bound, one_minus, to_f64, RpSpec, Site};
use crate::error::Result;
use crate::numerics::linalg;
use crate::numerics::stats::{loglog_fit, LinearFit};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationRow {
    pub n: usize,
    /// `1 - f_one` at `m = n + ell`.
    pub coherent: f64,
    /// `(d - 1) / (n + 1)`.
    pub eb: f64,
    /// One-site infidelity of the cloner over `C^{dr}` applied to a
    /// product input, when the output space is small enough.
    pub brute_force: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationTable {
    pub d: usize,
    pub r: usize,
    pub ell: usize,
    pub rows: Vec<SeparationRow>,
    pub coherent_fit: LinearFit,
    pub eb_fit: LinearFit,
}

/// Coherent versus measure-and-prepare one-site infidelities at fixed
/// excess `m = n + ell`, with log-log slopes of both columns.
pub fn separation_table(d: usize, r: usize, ell: usize, ns: &[usize]) -> Result<SeparationTable> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let spec = RpSpec::new(n, n + ell, d, r)?;
        let coherent = to_f64(&one_minus(&f_one_bound(&spec)));
        let eb = to_f64(&eb_tomography_risk(n, n + ell, d, Site::One)?);
        let dr = spec.pur_dim();
        let brute_force = if dr.checked_pow(spec.m as u32).is_some_and(|x| x <= MAX_CLONER_DIM) && ell > 0 {
            let cl = SymmetricCloner::new(n, spec.m, dr)?;
            let f = cl.one_site_fidelities(&linalg::basis_ket(dr, 0))?;
            Some(1.0 - f[0])
        } else {
            None
        };
        rows.push(SeparationRow { n, coherent, eb, brute_force });
    }
    let x: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let yc: Vec<f64> = rows.iter().map(|r| r.coherent).collect();
    let ye: Vec<f64> = rows.iter().map(|r| r.eb).collect();
    Ok(SeparationTable { d, r, ell, coherent_fit: loglog_fit(&x, &yc), eb_fit: loglog_fit(&x, &ye), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_never_exceeds_eb_for_qubits() {
        let ns: Vec<usize> = (1..=64).collect();
        let t = separation_table(2, 1, 1, &ns).unwrap();
        for row in &t.rows {
            assert!(row.coherent <= row.eb, "{row:?}");
            if let Some(b) = row.brute_force {
                assert!((b - row.coherent).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn eb_slope_is_near_minus_one() {
        let ns: Vec<usize> = (8..=64).collect();
        let t = separation_table(2, 1, 1, &ns).unwrap();
        assert!((t.eb_fit.slope + 1.0).abs() < 0.05);
    }

    #[test]
    fn coherent_values_are_exact() {
        let t = separation_table(2, 1, 1, &[1, 2, 3]).unwrap();
        for row in &t.rows {
            let n = row.n as f64;
            assert!((row.coherent - 1.0 / ((n + 1.0) * (n + 2.0))).abs() < 1e-15);
        }
    }
}
