use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::univariate::{check_param_space, cov_eval, limit_kernel_eval, KernelParams, LimitFamily, LimitKernelSpec};

const GRID: usize = 241;
const SLACK: f64 = 1.1;

/// Which parameter path drives the kernel towards its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitPath {
    /// The family's natural path; for the Gaussian, α, β, γ all grow.
    Default,
    /// Gaussian limit with β → α and a, γ growing.
    GaussianBetaToAlpha,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub target: LimitKernelSpec,
    pub path: LimitPath,
    /// (a, α, β, γ) at each step.
    pub parameter_path: Vec<(f64, f64, f64, f64)>,
    /// Sup over r ∈ [0, 6b] of |cov_eval - limit| at each step.
    pub sup_errors: Vec<f64>,
    /// Each error is at most 10% above the previous one.
    pub nonincreasing: bool,
}

fn path_point(t: &LimitKernelSpec, path: LimitPath, d: usize, m: i32) -> (f64, f64, f64, f64) {
    let h = d as f64 / 2.0;
    let b = t.b;
    let big = 10f64.powi(m);
    match (t.family, path) {
        (LimitFamily::Gaussian, LimitPath::GaussianBetaToAlpha) => {
            let al = h + 0.75;
            let ga = 10f64.powi(m + 2);
            (b * ga.sqrt(), al, al + 1.0 / big, ga)
        }
        (LimitFamily::Gaussian, _) => {
            let (al, be, ga) = (big, 2.0 * big, 2.0 * big);
            (b * (be * ga / al).sqrt(), al, be, ga)
        }
        (LimitFamily::Matern, _) => (2.0 * b * big, t.shape + h, big, big),
        (LimitFamily::Laguerre, _) => (b * big.sqrt(), t.shape + h, t.shape2 + h, big),
        (LimitFamily::Tricomi, _) => (b * big.sqrt(), 2.0 * t.shape + h, t.shape2 + h, big),
        (LimitFamily::IncGamma, _) => (b * big.sqrt(), t.shape + h, h + 1.0, big),
        (LimitFamily::Erfc, _) => (b * big.sqrt(), h + 0.5, h + 1.0, big),
    }
}

pub fn convergence_harness(target: &LimitKernelSpec, steps: usize, d: usize) -> Result<ConvergenceTrace> {
    convergence_harness_with(target, LimitPath::Default, steps, d)
}

/// Walks m = 1..=steps along the limit path and records the sup error against the limit kernel.
pub fn convergence_harness_with(
    target: &LimitKernelSpec,
    path: LimitPath,
    steps: usize,
    d: usize,
) -> Result<ConvergenceTrace> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if path == LimitPath::GaussianBetaToAlpha && target.family != LimitFamily::Gaussian {
        return Err(Error::Precondition("the beta-to-alpha path targets the Gaussian kernel".into()));
    }
    let rmax = 6.0 * target.b;
    let limit: Vec<f64> = (0..GRID)
        .map(|k| limit_kernel_eval(target, rmax * k as f64 / (GRID - 1) as f64))
        .collect::<Result<_>>()?;
    let mut parameter_path = Vec::with_capacity(steps);
    let mut sup_errors = Vec::with_capacity(steps);
    for m in 1..=steps as i32 {
        let (a, al, be, ga) = path_point(target, path, d, m);
        let rep = check_param_space(al, be, ga, d);
        if !rep.in_space {
            return Err(Error::ParamSpace(format!(
                "path leaves the region at m = {m}: ({al}, {be}, {ga}) fails {}",
                rep.failures().join("; ")
            )));
        }
        let p = KernelParams::new(a, al, be, ga)?;
        let mut sup = 0.0f64;
        for (k, lim) in limit.iter().enumerate() {
            let r = rmax * k as f64 / (GRID - 1) as f64;
            let v = cov_eval(&p, d, r)?;
            if !v.is_finite() {
                return Err(Error::Domain(format!("non-finite covariance at m = {m}, r = {r}")));
            }
            sup = sup.max((v - lim).abs());
        }
        parameter_path.push((a, al, be, ga));
        sup_errors.push(sup);
    }
    let nonincreasing = sup_errors.windows(2).all(|w| w[1] <= SLACK * w[0]);
    Ok(ConvergenceTrace {
        target: *target,
        path,
        parameter_path,
        sup_errors,
        nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matern_half_decreases() {
        let t = LimitKernelSpec::new(LimitFamily::Matern, 1.0, 0.5, 0.0).unwrap();
        let tr = convergence_harness(&t, 3, 1).unwrap();
        assert!(tr.nonincreasing, "{tr:?}");
        assert_eq!(tr.parameter_path[2], (2000.0, 1.0, 1000.0, 1000.0));
    }

    #[test]
    fn erfc_decreases() {
        let t = LimitKernelSpec::new(LimitFamily::Erfc, 1.0, 0.0, 0.0).unwrap();
        let tr = convergence_harness(&t, 3, 2).unwrap();
        assert!(tr.nonincreasing, "{tr:?}");
        assert!(tr.sup_errors[2] < tr.sup_errors[0]);
    }

    #[test]
    fn beta_to_alpha_needs_gaussian() {
        let t = LimitKernelSpec::new(LimitFamily::Erfc, 1.0, 0.0, 0.0).unwrap();
        assert!(convergence_harness_with(&t, LimitPath::GaussianBetaToAlpha, 2, 1).is_err());
    }
}
