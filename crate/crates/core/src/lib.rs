//! Shifted moment predictor for Dirichlet L-functions, together with the
//! direct computations and identity checks used to validate it.

pub mod arith;
pub mod error;
pub mod mp;

pub use error::{Error, Result};
pub use mp::{BigComplex, PrecisionContext};
pub mod empirical;
pub mod identities;
pub mod local;
pub mod predictor;
pub mod quad;
pub mod report;
pub mod special;
