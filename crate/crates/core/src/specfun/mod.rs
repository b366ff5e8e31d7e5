//! Gamma, Bessel, hypergeometric and confluent functions.

pub mod bessel;
pub mod confluent;
pub mod gamma;
pub mod hypergeom;
pub mod incgamma;

pub use bessel::{bessel_j, bessel_k, hyp0f1_neg};
pub use confluent::{laguerre_second_kind, tricomi_u};
pub use gamma::{gamma, log_gamma, SignedLog};
pub use hypergeom::{hyp1f2_neg, hyp2f1_kernel_form, hyp2f1_scaled, hyp_pfq, HypParams, PrecisionBudget, SeriesValue};
pub use incgamma::{erfc, reg_inc_gamma_q};
