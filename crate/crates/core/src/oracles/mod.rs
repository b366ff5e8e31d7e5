//! Slow, independently coded verification paths.

pub mod convergence;
pub mod gram;
pub mod hankel;
pub mod identities;
pub mod integral;

use serde::{Deserialize, Serialize};

pub use crate::linalg::GramResult;
pub use convergence::{convergence_harness, convergence_harness_with, ConvergenceTrace, LimitPath};
pub use gram::{gram, simulate_field, Simulation};
pub use hankel::hankel_roundtrip;
pub use identities::{mixture_identity_check, term_integration_identity_check};
pub use integral::{cov_eval_integral, cov_eval_mixture};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadMethod {
    AdaptiveGaussKronrod,
    BesselZeroPartition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadMethod,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: QuadMethod::AdaptiveGaussKronrod,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn hankel() -> Self {
        QuadratureSpec {
            method: QuadMethod::BesselZeroPartition,
            abs_tol: 1e-9,
            max_subdivisions: 3000,
        }
    }
}
