//! Dense linear algebra, states, channels, distances and seeded sampling.

pub mod channel;
pub mod linalg;
pub mod random;
pub mod state;
pub mod stats;

pub use channel::Channel;
pub use state::{fidelity, state_with_spectrum, trace_distance, DensityOperator};

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;

/// Hermiticity and trace tolerance for states.
pub const STATE_TOL: f64 = 1e-10;
/// Eigenvalues down to `-PSD_TOL` are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;
/// Trace-preservation and Choi tolerance for channels.
pub const CHANNEL_TOL: f64 = 1e-9;

/// Haar-random pure state as a density operator.
pub fn haar_pure_state<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    let v = random::haar_state_vector(d, rng);
    DensityOperator::pure_single(&v).expect("normalised Haar vector is a valid state")
}
