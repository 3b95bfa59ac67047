//! Self-similar groups acting on rooted regular trees, a Schreier-Sims
//! permutation group engine, and a finite-depth verification pipeline for the
//! rigid kernel of the Hanoi towers group.

pub mod analysis;
pub mod automorphism;
mod chain;
pub mod error;
pub mod f2;
pub mod game;
pub mod perm;
pub mod permgroup;
pub mod words;

pub use automorphism::{Portrait, Vertex};
pub use chain::StabChain;
pub use error::{Error, Result};
pub use f2::{F2Subspace, F2Vector};
pub use perm::Perm;
pub use permgroup::PermGroup;
pub use words::{Letter, Word, WreathRecursion};
