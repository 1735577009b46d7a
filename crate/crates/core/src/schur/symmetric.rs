use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::partitions::multiset_dim;
use super::weights::type_of_index;
use crate::numerics::{CMatrix, C64};

/// Type vectors of `n` particles in `d` levels, in the column order used by
/// [`symmetric_basis`].
pub fn type_vectors(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    let total = d.pow(n as u32);
    for idx in 0..total {
        groups.insert(type_of_index(idx, d, n), ());
    }
    // Descending order puts |0...0> first.
    groups.into_keys().rev().collect()
}

/// Isometry from `Sym^n(C^d)` into `(C^d)^{(x) n}` whose columns are the
/// normalised Dicke states, ordered like [`type_vectors`].
pub fn symmetric_basis(d: usize, n: usize) -> CMatrix {
    let types = type_vectors(d, n);
    let pos: BTreeMap<&Vec<usize>, usize> = types.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let total = d.pow(n as u32);
    let mut counts = vec![0usize; types.len()];
    let mut col_of = vec![0usize; total];
    for (idx, c) in col_of.iter_mut().enumerate() {
        let t = type_of_index(idx, d, n);
        *c = pos[&t];
        counts[*c] += 1;
    }
    let mut e = CMatrix::zeros(total, types.len());
    for (idx, &c) in col_of.iter().enumerate() {
        e[(idx, c)] = C64::new(1.0 / (counts[c] as f64).sqrt(), 0.0);
    }
    e
}

/// Projector onto the symmetric subspace of `(C^d)^{(x) n}`.
pub fn symmetric_projector(d: usize, n: usize) -> CMatrix {
    let e = symmetric_basis(d, n);
    &e * e.adjoint()
}

pub fn symmetric_dim(d: usize, n: usize) -> usize {
    multiset_dim(d, n).to_usize().expect("symmetric dimension fits in usize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg;
    use crate::schur::projectors::isotypic_projector;

    #[test]
    fn basis_is_isometry_onto_symmetric_sector() {
        for d in 1..=3 {
            for n in 0..=4 {
                let e = symmetric_basis(d, n);
                assert_eq!(e.ncols(), symmetric_dim(d, n));
                assert!((e.adjoint() * &e - linalg::identity(e.ncols())).camax() < 1e-12);
                if n > 0 {
                    let p = isotypic_projector(&[n], d).unwrap().matrix;
                    assert!((symmetric_projector(d, n) - p.as_ref()).camax() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn first_column_is_all_zero_state() {
        let e = symmetric_basis(3, 3);
        assert!((e[(0, 0)].re - 1.0).abs() < 1e-15);
    }
}
