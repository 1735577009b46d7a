//! Symmetric- and unitary-group structure of `(C^d)^{(x) n}`: partitions,
//! characters, isotypic projectors, weight vectors and permutation twirls.

pub mod partitions;
pub mod projectors;
pub mod symmetric;
pub mod twirl;
pub mod weights;

pub use partitions::{
    diagrams, multiset_dim, partitions, schur_polynomial, sector_probabilities, sn_character, sn_dim, weyl_dim,
    YoungDiagram,
};
pub use projectors::{isotypic_projector, schur_sample, sector_decomposition, IsotypicProjector, SectorDecomposition};
pub use twirl::commutant_twirl;
pub use weights::{dimension_ratio, highest_weight_vector, lowest_weight_vector, type_permutation_action};
pub use symmetric::{symmetric_basis, symmetric_dim, symmetric_projector, type_vectors};
