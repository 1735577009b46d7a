//! Risk evaluation for inference protocols, twirling superchannels,
//! measure-and-prepare channels and the de Finetti approximation.

pub mod definetti;
pub mod loss;
pub mod povm;
pub mod task;
pub mod twirls;

pub use definetti::{definetti_bound, definetti_gap, definetti_mp_channel, symmetric_marginal_channel};
pub use loss::Loss;
pub use povm::{eb_channel, is_ppt, ContinuousPovm, FinitePovm};
pub use task::{
    average_risk, haar_pure_sampler, one_site_risk, orbit_sampler, worst_case_risk, CqiTask, FnProtocol, Protocol,
    RiskMode, RiskReport, SiteMode,
};
pub use twirls::{exchange_twirl, unitary_twirl_exact, unitary_twirl_mc, Side};
