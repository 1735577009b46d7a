//! Random purification and mixed-state cloning: the optimal symmetric
//! cloner, the environment-twirled purification, purify-and-clone, and the
//! closed-form coherent and measure-and-prepare fidelities.

pub mod cloner;
pub mod formulas;
pub mod rp;
pub mod table;

pub use cloner::{werner_cloner, SymmetricCloner};
pub use formulas::{eb_tomography_risk, f_all_bound, f_one_bound, RpSpec, Site};
pub use rp::{purification, rp_twirl_exact, rp_twirl_mc, PurifyAndClone, PurifyAndCloneReport, TwirlMode};
pub use table::{separation_table, SeparationRow, SeparationTable};
