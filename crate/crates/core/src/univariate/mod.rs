//! Univariate Gauss hypergeometric covariance.

pub mod kernel;
pub mod limits;
pub mod operators;
pub mod params;
pub mod special;
pub mod truncated;

pub use kernel::{cov_eval, g_radial, smoothness, spectral_eval, spherical_spectral, SmoothnessReport};
pub use limits::{limit_kernel_eval, matern, LimitFamily, LimitKernelSpec};
pub use operators::{descente, extend, max_extension, montee, restrict, Transfer};
pub use params::{check_param_space, zeta_normalizer, KernelParams, ParamSpaceReport};
pub use special::{make_askey, make_spherical, make_wendland};
pub use truncated::{truncated_poly_coeffs, TruncatedExpansion};
