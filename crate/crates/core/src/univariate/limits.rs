use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::bessel::bessel_k;
use crate::specfun::confluent::{laguerre_second_kind, tricomi_u};
use crate::specfun::gamma::{ln_gamma_pos, log_gamma_ratio};
use crate::specfun::incgamma::{erfc, reg_inc_gamma_q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitFamily {
    Matern,
    Laguerre,
    Tricomi,
    IncGamma,
    Erfc,
    Gaussian,
}

/// A limit kernel with scale factor `b`.
///
/// `shape` is ν = α - d/2 for Matérn, Laguerre and IncGamma and n for Tricomi (with α - d/2 = 2n).
/// `shape2` is μ = β - d/2 for Laguerre and Tricomi and is ignored otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitKernelSpec {
    pub family: LimitFamily,
    pub b: f64,
    pub shape: f64,
    pub shape2: f64,
}

impl LimitKernelSpec {
    pub fn new(family: LimitFamily, b: f64, shape: f64, shape2: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("scale b must be positive, got {b}")));
        }
        let ok = match family {
            LimitFamily::Matern | LimitFamily::IncGamma => shape > 0.0,
            LimitFamily::Laguerre => shape > 0.0 && shape2 > shape,
            LimitFamily::Tricomi => shape >= 1.0 && shape == shape.floor(),
            LimitFamily::Erfc | LimitFamily::Gaussian => true,
        };
        if !ok {
            return Err(Error::Domain(format!("invalid shape ({shape}, {shape2}) for {family:?}")));
        }
        Ok(Self {
            family,
            b,
            shape,
            shape2,
        })
    }
}

/// Matérn correlation 2/Γ(ν) (r/2b)^ν K_ν(r/b).
pub fn matern(nu: f64, b: f64, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(1.0);
    }
    let x = r / b;
    if x > 700.0 {
        return Ok(0.0);
    }
    let k = bessel_k(nu, x)?;
    Ok(2.0 * k * (nu * (0.5 * x).ln() - ln_gamma_pos(nu)).exp())
}

pub fn limit_kernel_eval(spec: &LimitKernelSpec, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    let x = (r / spec.b).powi(2);
    match spec.family {
        LimitFamily::Matern => matern(spec.shape, spec.b, r),
        LimitFamily::Gaussian => Ok((-x).exp()),
        LimitFamily::Erfc => Ok(erfc(r / spec.b)),
        LimitFamily::IncGamma => reg_inc_gamma_q(spec.shape, x),
        LimitFamily::Laguerre => {
            let (nu, mu) = (spec.shape, spec.shape2);
            let c = log_gamma_ratio(&[mu], &[nu])?;
            Ok(c.value() * laguerre_second_kind(1.0 - mu, 1.0 - nu, x)?)
        }
        LimitFamily::Tricomi => {
            let (n2, mu) = (2.0 * spec.shape, spec.shape2);
            let c = log_gamma_ratio(&[n2 + 1.0 - mu], &[n2])?;
            Ok(c.value() * tricomi_u(1.0 - mu, 1.0 - n2, -x)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let m = LimitKernelSpec::new(LimitFamily::Matern, 1.0, 0.5, 0.0).unwrap();
        assert!((limit_kernel_eval(&m, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-14);
        let g = LimitKernelSpec::new(LimitFamily::Gaussian, 2.0, 0.0, 0.0).unwrap();
        assert!((limit_kernel_eval(&g, 2.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        let v = matern(1.5, 0.7, 0.9).unwrap();
        assert!((v - 0.631_892_678_010_432_862_04).abs() < 1e-13);
    }

    #[test]
    fn unit_at_origin() {
        let specs = [
            LimitKernelSpec::new(LimitFamily::Matern, 1.0, 1.3, 0.0).unwrap(),
            LimitKernelSpec::new(LimitFamily::Laguerre, 1.0, 0.7, 2.5).unwrap(),
            LimitKernelSpec::new(LimitFamily::Tricomi, 1.0, 1.0, 3.5).unwrap(),
            LimitKernelSpec::new(LimitFamily::IncGamma, 1.0, 0.8, 0.0).unwrap(),
            LimitKernelSpec::new(LimitFamily::Erfc, 1.0, 0.0, 0.0).unwrap(),
        ];
        for s in &specs {
            assert!((limit_kernel_eval(s, 0.0).unwrap() - 1.0).abs() < 1e-10, "{s:?}");
        }
    }

    #[test]
    fn tricomi_matches_laguerre_at_even_order() {
        let t = LimitKernelSpec::new(LimitFamily::Tricomi, 1.0, 1.0, 3.5).unwrap();
        let l = LimitKernelSpec::new(LimitFamily::Laguerre, 1.0, 2.0, 3.5).unwrap();
        for i in 0..12 {
            let r = i as f64 * 0.3;
            let a = limit_kernel_eval(&t, r).unwrap();
            let b = limit_kernel_eval(&l, r).unwrap();
            assert!((a - b).abs() < 1e-8, "r={r}: {a} vs {b}");
        }
    }

    #[test]
    fn tricomi_reference() {
        let t = LimitKernelSpec::new(LimitFamily::Tricomi, 1.0, 1.0, 3.5).unwrap();
        for &(x, want) in &[(0.1f64, 0.800_817_425_9), (1.0, 0.175_042_039_4), (3.0, 0.011_462_464_8)] {
            let v = limit_kernel_eval(&t, x.sqrt()).unwrap();
            assert!((v - want).abs() < 1e-9, "x={x}: {v}");
        }
    }
}
