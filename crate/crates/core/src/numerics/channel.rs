use std::sync::OnceLock;

use super::linalg::{self, eigh, hermiticity_defect};
use super::state::DensityOperator;
use super::{CMatrix, CVector, C64, CHANNEL_TOL};
use crate::error::{Error, Result};

/// Completely positive trace-preserving map in Kraus form.
///
/// The Choi matrix uses the input-first convention
/// `T = sum_ij |i><j| (x) Phi(|i><j|)`, so `Tr_out T = I_in`.
#[derive(Debug)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    d_in: usize,
    d_out: usize,
    choi: OnceLock<CMatrix>,
}

impl Clone for Channel {
    fn clone(&self) -> Self {
        let choi = OnceLock::new();
        if let Some(c) = self.choi.get() {
            let _ = choi.set(c.clone());
        }
        Self { kraus: self.kraus.clone(), d_in: self.d_in, d_out: self.d_out, choi }
    }
}

impl Channel {
    /// Build from Kraus operators, checking `sum K^dagger K = I`.
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        let ch = Self::from_kraus_unchecked(kraus)?;
        let defect = ch.trace_preservation_defect();
        if defect > CHANNEL_TOL {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(ch)
    }

    /// Build from Kraus operators checking only shapes. Used for maps whose
    /// trace preservation holds by construction but whose direct check would
    /// be expensive.
    pub fn from_kraus_unchecked(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty Kraus family".into()))?;
        let (d_out, d_in) = first.shape();
        if kraus.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        Ok(Self { kraus, d_in, d_out, choi: OnceLock::new() })
    }

    /// Build from a Choi matrix on `in (x) out`.
    pub fn from_choi(choi: &CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if choi.nrows() != d_in * d_out || choi.ncols() != d_in * d_out {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix {}x{} for d_in={d_in}, d_out={d_out}",
                choi.nrows(),
                choi.ncols()
            )));
        }
        let defect = hermiticity_defect(choi);
        if defect > CHANNEL_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let marg = linalg::partial_trace(choi, &[d_in, d_out], &[0])?;
        let mdef = (&marg - linalg::identity(d_in)).camax();
        if mdef > CHANNEL_TOL {
            return Err(Error::BadChoiMarginal(mdef));
        }
        let (vals, vecs) = eigh(choi);
        let scale = vals.iter().map(|v| v.abs()).fold(1.0, f64::max);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -CHANNEL_TOL * scale {
            return Err(Error::NotPositive(min));
        }
        let mut kraus = Vec::new();
        for (j, &lam) in vals.iter().enumerate() {
            if lam <= CHANNEL_TOL * 1e-3 * scale {
                continue;
            }
            let s = lam.sqrt();
            let v = vecs.column(j);
            kraus.push(CMatrix::from_fn(d_out, d_in, |a, i| v[i * d_out + a] * s));
        }
        if kraus.is_empty() {
            return Err(Error::NotPositive(min));
        }
        let ch = Self { kraus, d_in, d_out, choi: OnceLock::new() };
        let _ = ch.choi.set(choi.clone());
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self::unitary(&linalg::identity(d)).expect("identity is unitary")
    }

    pub fn unitary(u: &CMatrix) -> Result<Self> {
        Self::from_kraus(vec![u.clone()])
    }

    /// `rho -> (1 - p) rho + p Tr(rho) I/d`, valid for `p` in `[0, 1 + 1/(d^2-1)]`.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        let omega = maximally_entangled_unnormalized(d);
        let choi = linalg::projector(&omega) * C64::new(1.0 - p, 0.0)
            + linalg::identity(d * d) * C64::new(p / d as f64, 0.0);
        Self::from_choi(&choi, d, d)
    }

    /// Complete dephasing in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d).map(|i| linalg::projector(&linalg::basis_ket(d, i))).collect();
        Self::from_kraus(kraus).expect("projective measurement is trace preserving")
    }

    /// Discard the input and prepare `sigma`.
    pub fn trace_and_replace(d_in: usize, sigma: &DensityOperator) -> Self {
        let (vals, vecs) = eigh(sigma.matrix());
        let mut kraus = Vec::new();
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= 0.0 {
                continue;
            }
            let v: CVector = vecs.column(k).into_owned() * C64::new(lam.sqrt(), 0.0);
            for i in 0..d_in {
                kraus.push(linalg::outer(&v, &linalg::basis_ket(d_in, i)));
            }
        }
        Self::from_kraus_unchecked(kraus).expect("nonempty")
    }

    /// Measure with rank-one effects `|e_i><e_i|` scaled by `weights` and
    /// prepare the paired states. Effects must resolve the identity.
    pub fn measure_prepare(effects: &[CMatrix], states: &[DensityOperator]) -> Result<Self> {
        if effects.len() != states.len() || effects.is_empty() {
            return Err(Error::DimensionMismatch("effects and states differ in number".into()));
        }
        let d_in = effects[0].nrows();
        let d_out = states[0].dim();
        let mut choi = CMatrix::zeros(d_in * d_out, d_in * d_out);
        for (e, s) in effects.iter().zip(states) {
            choi += linalg::kron(&e.transpose(), s.matrix());
        }
        Self::from_choi(&choi, d_in, d_out)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Max-entry deviation of `sum K^dagger K` from the identity.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            acc += k.adjoint() * k;
        }
        (acc - linalg::identity(self.d_in)).camax()
    }

    pub fn choi(&self) -> &CMatrix {
        self.choi.get_or_init(|| {
            let n = self.d_in * self.d_out;
            let mut t = CMatrix::zeros(n, n);
            for k in &self.kraus {
                let v = CVector::from_fn(n, |idx, _| k[(idx % self.d_out, idx / self.d_out)]);
                t += &v * v.adjoint();
            }
            t
        })
    }

    /// Channel action on an arbitrary operator.
    pub fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.d_in || x.ncols() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input {} but operator is {}x{}",
                self.d_in,
                x.nrows(),
                x.ncols()
            )));
        }
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        Ok(out)
    }

    /// Output on a pure input `|psi><psi|`, avoiding the input density matrix.
    pub fn apply_pure(&self, psi: &CVector) -> Result<CMatrix> {
        if psi.len() != self.d_in {
            return Err(Error::DimensionMismatch("pure input dimension".into()));
        }
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            let v = k * psi;
            out += &v * v.adjoint();
        }
        Ok(out)
    }

    /// Apply to a state; output carries `out_dims` (or a single factor).
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        self.apply_with_dims(rho, vec![self.d_out])
    }

    pub fn apply_with_dims(&self, rho: &DensityOperator, out_dims: Vec<usize>) -> Result<DensityOperator> {
        let m = self.apply_matrix(rho.matrix())?;
        DensityOperator::new(linalg::hermitian_part(&m), out_dims)
    }

    /// `after . self`: first `self`, then `after`.
    pub fn then(&self, after: &Channel) -> Result<Channel> {
        if self.d_out != after.d_in {
            return Err(Error::DimensionMismatch("composition dimensions".into()));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * after.kraus.len());
        for b in &after.kraus {
            for a in &self.kraus {
                kraus.push(b * a);
            }
        }
        Ok(Self::from_kraus_unchecked(kraus)?.compress())
    }

    pub fn tensor(&self, other: &Channel) -> Channel {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(linalg::kron(a, b));
            }
        }
        Self::from_kraus_unchecked(kraus).expect("nonempty").compress()
    }

    /// Convex mixture `sum_i w_i ch_i`.
    pub fn mixture(weights: &[f64], channels: &[Channel]) -> Result<Channel> {
        if weights.len() != channels.len() || channels.is_empty() {
            return Err(Error::DimensionMismatch("mixture weights and channels".into()));
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("mixture weights must form a distribution".into()));
        }
        let (d_in, d_out) = (channels[0].d_in, channels[0].d_out);
        let mut kraus = Vec::new();
        for (w, ch) in weights.iter().zip(channels) {
            if ch.d_in != d_in || ch.d_out != d_out {
                return Err(Error::DimensionMismatch("mixture of channels with different shapes".into()));
            }
            if *w == 0.0 {
                continue;
            }
            let s = C64::new(w.sqrt(), 0.0);
            kraus.extend(ch.kraus.iter().map(|k| k * s));
        }
        Ok(Self::from_kraus_unchecked(kraus)?.compress())
    }

    /// Re-derive a minimal Kraus family from the Choi matrix when the
    /// current family is larger than `d_in * d_out`.
    pub fn compress(self) -> Channel {
        if self.kraus.len() <= self.d_in * self.d_out {
            return self;
        }
        let choi = self.choi().clone();
        Self::from_choi(&choi, self.d_in, self.d_out).unwrap_or(self)
    }
}

/// `sum_i |ii>` in `C^d (x) C^d`.
pub fn maximally_entangled_unnormalized(d: usize) -> CVector {
    let mut v = CVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = C64::new(1.0, 0.0);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::c;
    use crate::numerics::random::{haar_unitary, seeded_rng};
    use crate::numerics::{fidelity, haar_pure_state, trace_distance};
    use proptest::prelude::*;

    fn random_two_kraus(seed: u64) -> Channel {
        let mut rng = seeded_rng(seed);
        let u = haar_unitary(4, &mut rng);
        // Isometry C^2 -> C^2 (x) C^2 from the first two columns.
        let k0 = CMatrix::from_fn(2, 2, |a, i| u[(a, i)]);
        let k1 = CMatrix::from_fn(2, 2, |a, i| u[(2 + a, i)]);
        Channel::from_kraus(vec![k0, k1]).unwrap()
    }

    #[test]
    fn identity_channel_choi() {
        let ch = Channel::identity(3);
        let omega = maximally_entangled_unnormalized(3);
        assert!((ch.choi() - linalg::projector(&omega)).norm() < 1e-14);
    }

    #[test]
    fn replace_channel_choi() {
        let zero = DensityOperator::basis(2, 0);
        let ch = Channel::trace_and_replace(2, &zero);
        let expect = linalg::kron(&linalg::identity(2), zero.matrix());
        assert!((ch.choi() - expect).norm() < 1e-14);
    }

    #[test]
    fn choi_round_trip() {
        let ch = random_two_kraus(4);
        let back = Channel::from_choi(ch.choi(), 2, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let x = linalg::outer(&linalg::basis_ket(2, i), &linalg::basis_ket(2, j));
                let a = ch.apply_matrix(&x).unwrap();
                let b = back.apply_matrix(&x).unwrap();
                assert!((a - b).camax() < 1e-9);
            }
        }
    }

    #[test]
    fn apply_examples() {
        let mut rng = seeded_rng(2);
        let rho = haar_pure_state(2, &mut rng);
        let out = Channel::identity(2).apply(&rho).unwrap();
        assert!((out.matrix() - rho.matrix()).camax() < 1e-14);
        let dep = Channel::depolarizing(2, 1.0).unwrap();
        let out = dep.apply(&rho).unwrap();
        assert!((out.matrix() - DensityOperator::maximally_mixed(2).matrix()).camax() < 1e-12);
        let plus = DensityOperator::pure_single(&CVector::from_vec(vec![c(1., 0.), c(1., 0.)])).unwrap();
        let out = Channel::dephasing(2).apply(&plus).unwrap();
        assert!((out.matrix() - DensityOperator::maximally_mixed(2).matrix()).camax() < 1e-14);
    }

    #[test]
    fn choi_validation_errors() {
        let bad_marg = linalg::identity(4) * c(0.25, 0.0);
        assert!(matches!(Channel::from_choi(&bad_marg, 2, 2), Err(Error::BadChoiMarginal(_))));
        let mut neg = linalg::identity(4) * c(0.5, 0.0);
        neg[(0, 0)] = c(1.5, 0.0);
        neg[(1, 1)] = c(-0.5, 0.0);
        assert!(matches!(Channel::from_choi(&neg, 2, 2), Err(Error::NotPositive(_))));
        let not_tp = vec![linalg::identity(2) * c(0.5, 0.0)];
        assert!(matches!(Channel::from_kraus(not_tp), Err(Error::NotTracePreserving(_))));
    }

    #[test]
    fn composition_and_mixture() {
        let a = random_two_kraus(1);
        let b = random_two_kraus(2);
        let ab = a.then(&b).unwrap();
        let mut rng = seeded_rng(9);
        let rho = haar_pure_state(2, &mut rng);
        let direct = b.apply(&a.apply(&rho).unwrap()).unwrap();
        assert!((ab.apply(&rho).unwrap().matrix() - direct.matrix()).camax() < 1e-10);
        let mix = Channel::mixture(&[0.25, 0.75], &[a.clone(), b.clone()]).unwrap();
        let expect = a.apply_matrix(rho.matrix()).unwrap() * c(0.25, 0.0)
            + b.apply_matrix(rho.matrix()).unwrap() * c(0.75, 0.0);
        assert!((mix.apply(&rho).unwrap().matrix() - expect).camax() < 1e-10);
    }

    fn qubit_state(seed: u64) -> DensityOperator {
        let mut rng = seeded_rng(seed);
        let u = haar_unitary(2, &mut rng);
        let p = crate::numerics::random::random_spectrum(2, &mut rng);
        crate::numerics::state_with_spectrum(&p, &u).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn fidelity_is_monotone_under_channels(seed in any::<u64>()) {
            let ch = random_two_kraus(seed);
            let rho = qubit_state(seed ^ 0x55);
            let sigma = qubit_state(seed ^ 0xaa);
            let before = fidelity(&rho, &sigma).unwrap();
            let after = fidelity(&ch.apply(&rho).unwrap(), &ch.apply(&sigma).unwrap()).unwrap();
            prop_assert!(after >= before - 1e-9);
        }

        #[test]
        fn fuchs_van_de_graaf(seed in any::<u64>()) {
            let rho = qubit_state(seed);
            let sigma = qubit_state(seed.wrapping_add(1));
            let f = fidelity(&rho, &sigma).unwrap();
            let t = trace_distance(&rho, &sigma).unwrap();
            prop_assert!(1.0 - f.sqrt() <= t + 1e-9);
            prop_assert!(t <= (1.0 - f).max(0.0).sqrt() + 1e-9);
        }

        #[test]
        fn channel_outputs_are_states(seed in any::<u64>()) {
            let ch = random_two_kraus(seed);
            let rho = qubit_state(seed ^ 7);
            let out = ch.apply(&rho).unwrap();
            prop_assert!(DensityOperator::single(out.matrix().clone()).is_ok());
        }

        #[test]
        fn partial_trace_of_tensor(seed in any::<u64>()) {
            let a = qubit_state(seed);
            let b = qubit_state(seed ^ 3);
            let ab = a.tensor(&b);
            prop_assert!((ab.partial_trace(&[0]).unwrap().matrix() - a.matrix()).camax() < 1e-14);
            prop_assert!((ab.partial_trace(&[1]).unwrap().matrix() - b.matrix()).camax() < 1e-14);
        }
    }
}
