//! Coherent versus incoherent quantum inference: exact and Monte-Carlo
//! evaluation of cloning, purification, purity amplification and
//! density-matrix exponentiation protocols against their
//! measure-and-prepare baselines.

pub mod cloning_rp;
pub mod dme;
pub mod error;
pub mod numerics;
pub mod qpa;
pub mod framework;
pub mod harness;
pub mod schur;

pub use error::{Error, Result};
