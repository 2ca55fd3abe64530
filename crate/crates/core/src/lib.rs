//! Amalgamated duplications `A x| F` of finite-dimensional complex algebras.

pub mod algebra;
pub mod bundle;
pub mod checks;
pub mod derivations;
pub mod duals;
pub mod error;
pub mod fixtures;
pub mod ideals;
pub mod linalg;
pub mod multipliers;
pub mod random;
pub mod report;
pub mod spectrum;

pub use algebra::{BimoduleAction, Element, FinDimAlgebra, Triple};
pub use error::{Error, Result};
pub use linalg::{Subspace, C64, DEFAULT_TOL};
