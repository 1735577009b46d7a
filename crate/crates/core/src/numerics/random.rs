//! Seeded randomness and Haar sampling.
//!
//! Every Monte-Carlo routine takes a 64-bit master seed. Work is split into a
//! fixed number of streams (ChaCha stream ids), so results depend only on
//! `(seed, stream count)` and never on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{CMatrix, CVector, C64};

pub type SimRng = ChaCha8Rng;

/// Number of independent streams a Monte-Carlo loop is split into.
pub const DEFAULT_STREAMS: usize = 64;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Run `samples` draws of `f` split over `streams` seeded streams in
/// parallel. Results are returned in stream order, then draw order.
pub fn par_samples<T, F>(samples: usize, seed: u64, streams: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SimRng) -> T + Sync,
{
    let streams = streams.max(1).min(samples.max(1));
    let base = samples / streams;
    let extra = samples % streams;
    let chunks: Vec<Vec<T>> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let count = base + usize::from(s < extra);
            let mut rng = stream_rng(seed, s as u64);
            (0..count).map(|_| f(&mut rng)).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal pushed back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random unit vector in `C^d`.
pub fn haar_state_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| complex_gaussian(rng));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Uniformly random permutation of `0..n` (Fisher-Yates).
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Random probability vector drawn uniformly from the simplex, sorted
/// descending.
pub fn random_spectrum<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let mut e: Vec<f64> = (0..d).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = e.iter().sum();
    e.iter_mut().for_each(|x| *x /= s);
    e.sort_by(|a, b| b.total_cmp(a));
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::identity;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = seeded_rng(7);
        for d in 1..6 {
            let u = haar_unitary(d, &mut rng);
            assert!((&u * u.adjoint() - identity(d)).norm() < 1e-12);
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a = par_samples(100, 5, 8, |r| r.random::<u64>());
        let b = par_samples(100, 5, 8, |r| r.random::<u64>());
        assert_eq!(a, b);
        let c = par_samples(100, 6, 8, |r| r.random::<u64>());
        assert_ne!(a, c);
    }

    #[test]
    fn random_permutation_is_permutation() {
        let mut rng = seeded_rng(1);
        let mut p = random_permutation(9, &mut rng);
        p.sort();
        assert_eq!(p, (0..9).collect::<Vec<_>>());
    }
}
