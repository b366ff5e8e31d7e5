//! Matrix-valued Gauss hypergeometric kernels.

pub mod bivariate;
pub mod cnd;
pub mod gram;
pub mod params;
pub mod psi;
pub mod validate;

pub use bivariate::{determinantal_witness, make_bivariate, BivariateSpec, BivariateVariant};
pub use cnd::{is_cnd, CndCertificate, CND_TOL};
pub use gram::gram_multivar;
pub use params::{cross_eval, MultivarDoc, MultivarParams};
pub use psi::{psi_check, psi_eval, PsiCheckReport, PsiFamily, PsiSpec};
pub use validate::{validate, Baseline, Certificate, ConditionSet, ValidityReport};
