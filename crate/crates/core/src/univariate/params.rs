use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma_pos;

/// Range, shape parameters and variance of a Gauss hypergeometric covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sigma2: f64,
}

impl KernelParams {
    pub fn new(a: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::with_sigma2(a, alpha, beta, gamma, 1.0)
    }

    pub fn with_sigma2(a: f64, alpha: f64, beta: f64, gamma: f64, sigma2: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("range a must be positive and finite, got {a}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Domain(format!("sigma2 must be positive and finite, got {sigma2}")));
        }
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::Domain("shape parameters must be finite".into()));
        }
        Ok(Self {
            a,
            alpha,
            beta,
            gamma,
            sigma2,
        })
    }

    /// Same range and variance, shape parameters shifted by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            alpha: self.alpha + delta,
            beta: self.beta + delta,
            gamma: self.gamma + delta,
            ..*self
        }
    }

    pub fn shapes(&self) -> (f64, f64, f64) {
        (self.alpha, self.beta, self.gamma)
    }
}

/// Membership of (α, β, γ) in the sufficient parameter region for dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpaceReport {
    pub dimension: usize,
    pub in_space: bool,
    pub cond_alpha: bool,
    pub cond_product: bool,
    pub cond_sum: bool,
    pub boundary: bool,
}

impl ParamSpaceReport {
    /// Human-readable labels of the conditions that do not hold.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.cond_alpha {
            out.push(if self.dimension == 0 { "alpha > 0" } else { "alpha > d/2" });
        }
        if !self.cond_product {
            out.push("2(beta-alpha)(gamma-alpha) >= alpha");
        }
        if !self.cond_sum {
            out.push("2(beta+gamma) >= 6alpha+1");
        }
        out
    }
}

const BOUNDARY_TOL: f64 = 1e-12;

fn near_equal(lhs: f64, rhs: f64) -> bool {
    (lhs - rhs).abs() <= BOUNDARY_TOL * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Test the sufficient validity conditions; d = 0 gives the dimension-free region.
pub fn check_param_space(alpha: f64, beta: f64, gamma: f64, d: usize) -> ParamSpaceReport {
    let half_d = d as f64 / 2.0;
    let cond_alpha = alpha > half_d;
    let prod = 2.0 * (beta - alpha) * (gamma - alpha);
    let sum = 2.0 * (beta + gamma);
    let cond_product = prod >= alpha;
    let cond_sum = sum >= 6.0 * alpha + 1.0;
    let finite = alpha.is_finite() && beta.is_finite() && gamma.is_finite();
    let boundary = near_equal(alpha, half_d) || near_equal(prod, alpha) || near_equal(sum, 6.0 * alpha + 1.0);
    ParamSpaceReport {
        dimension: d,
        in_space: finite && cond_alpha && cond_product && cond_sum,
        cond_alpha,
        cond_product,
        cond_sum,
        boundary,
    }
}

pub(crate) fn require_space(alpha: f64, beta: f64, gamma: f64, d: usize) -> Result<()> {
    let rep = check_param_space(alpha, beta, gamma, d);
    if rep.in_space {
        Ok(())
    } else {
        Err(Error::ParamSpace(format!(
            "(alpha, beta, gamma) = ({alpha}, {beta}, {gamma}) fails in dimension {d}: {}",
            rep.failures().join("; ")
        )))
    }
}

/// ln ζ_d for shapes where every gamma argument is positive.
pub(crate) fn ln_zeta(a: f64, alpha: f64, beta: f64, gamma: f64, d: usize) -> Result<f64> {
    let h = d as f64 / 2.0;
    if !(alpha > h && beta > h && gamma > h) {
        return Err(Error::Precondition(format!(
            "normalizer undefined for ({alpha}, {beta}, {gamma}) in dimension {d}"
        )));
    }
    Ok(h * std::f64::consts::PI.ln() + d as f64 * a.ln() + ln_gamma_pos(alpha) + ln_gamma_pos(beta - h)
        + ln_gamma_pos(gamma - h)
        - ln_gamma_pos(alpha - h)
        - ln_gamma_pos(beta)
        - ln_gamma_pos(gamma))
}

/// Normalization factor making the covariance equal to one at the origin.
pub fn zeta_normalizer(p: &KernelParams, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    require_space(p.alpha, p.beta, p.gamma, d)?;
    ln_zeta(p.a, p.alpha, p.beta, p.gamma, d).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_examples() {
        let r = check_param_space(2.0, 2.5, 4.0, 3);
        assert!(r.in_space && r.boundary);
        let r = check_param_space(2.0, 2.1, 2.1, 3);
        assert!(!r.in_space && !r.cond_product);
        let r = check_param_space(1.0, 2.0, 2.0, 1);
        assert!(r.in_space && !r.boundary);
        assert!(check_param_space(0.2, 3.0, 3.0, 0).in_space);
        assert!(!check_param_space(0.2, 3.0, 3.0, 1).in_space);
    }

    #[test]
    fn normalizer_values() {
        let p = KernelParams::new(1.0, 1.0, 2.0, 2.0).unwrap();
        let z = zeta_normalizer(&p, 1).unwrap();
        assert!((z - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let p = KernelParams::new(1.0, 2.0, 2.5, 4.0).unwrap();
        let z = zeta_normalizer(&p, 3).unwrap();
        assert!((z - 0.523_598_775_598_298_873_08).abs() < 1e-15);
        for d in 1..4 {
            let p = KernelParams::new(0.7, 2.3, 4.1, 5.5).unwrap();
            let q = KernelParams { a: 1.4, ..p };
            let ratio = zeta_normalizer(&q, d).unwrap() / zeta_normalizer(&p, d).unwrap();
            assert!((ratio - 2f64.powi(d as i32)).abs() < 1e-13);
        }
        let p = KernelParams::new(1.0, 2.0, 2.1, 2.1).unwrap();
        assert!(zeta_normalizer(&p, 3).is_err());
    }

    #[test]
    fn constructor_rejects_bad_inputs() {
        assert!(KernelParams::new(0.0, 1.0, 2.0, 2.0).is_err());
        assert!(KernelParams::with_sigma2(1.0, 1.0, 2.0, 2.0, -1.0).is_err());
        assert!(KernelParams::new(1.0, f64::NAN, 2.0, 2.0).is_err());
    }
}
