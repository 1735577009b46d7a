//! Density-matrix exponentiation: the coherent partial-swap protocol, the
//! tomography baseline, and the lower-bound machinery for measure-first
//! strategies.

pub mod incoherent;
pub mod lmr;
pub mod lower_bound;

pub use incoherent::{
    clip_to_state, gell_mann_basis, incoherent_dme, incoherent_dme_error, tomography_estimate, IncoherentError,
    Tomography,
};
pub use lmr::{dme_error, dme_probes, ideal_dme, lmr_protocol, lmr_step, DmeSpec};
pub use lower_bound::{
    a_t, compute_r0, compute_r0_with, embedding_bound_check, embedding_map, gamma_coefficients, gamma_state,
    gamma_state_exp, gamma_vector, helstrom_error, hypercube_chain, incoherent_lower_bound, r0_conditions_hold,
    theta_state, EmbeddingCheck, HypercubeChain, R0Options, ThetaPoint,
};
