//! Purity amplification: spectral-gap bookkeeping, sample-complexity bounds
//! for coherent protocols, and the covariant measure-and-prepare baseline
//! for eigenstate tomography.

pub mod bounds;
pub mod eb;
pub mod nearest;
pub mod spectrum;

pub use bounds::{
    adjacent_gap_upper, coherent_sample_upper, coherent_sample_upper_with, eb_asymptotic_coefficient,
    eb_asymptotic_fidelity, eb_one_site_lower, eb_sample_lower, one_gap_upper, relative_gap_loss, s0,
    separation_crossover, BoundReport,
};
pub use eb::{eb_covariant_protocol, eb_covariant_protocol_with, EbBackend, EbConfig, EbEstimate};
pub use nearest::{nearest_state_estimator, NearestState, PureFamily};
pub use spectrum::SpectrumParams;
