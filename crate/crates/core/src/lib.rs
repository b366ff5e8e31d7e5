//! Gauss hypergeometric compactly supported covariance kernels.

pub mod dd;
pub mod error;
pub mod linalg;
pub mod multivariate;
pub mod oracles;
pub mod quad;
pub mod specfun;
pub mod univariate;

pub use error::{Error, Result};
