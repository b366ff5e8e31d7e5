use super::params::{check_param_space, KernelParams};
use crate::error::{Error, Result};

/// Spherical (Euclid's hat) kernel and its montées: α = (d+1)/2 + κ, β = d/2 + 1 + κ, γ = d + 1 + 2κ.
///
/// Non-integer κ > -1/2 gives the fractional montée or descente.
pub fn make_spherical(d: usize, kappa: f64, a: f64) -> Result<KernelParams> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if !(kappa > -0.5) {
        return Err(Error::Domain(format!("kappa must exceed -1/2, got {kappa}")));
    }
    let h = d as f64 / 2.0;
    let p = KernelParams::new(a, h + 0.5 + kappa, h + 1.0 + kappa, d as f64 + 1.0 + 2.0 * kappa)?;
    let rep = check_param_space(p.alpha, p.beta, p.gamma, d);
    if !rep.in_space {
        return Err(Error::ParamSpace(format!(
            "spherical kernel with kappa = {kappa} fails {}",
            rep.failures().join("; ")
        )));
    }
    Ok(p)
}

/// Askey kernel (1 - r/a)₊^ℓ.
pub fn make_askey(d: usize, ell: f64, a: f64) -> Result<KernelParams> {
    make_wendland(d, 0.0, ell, a)
}

/// Generalized Wendland kernel with smoothness κ ≥ 0 and exponent ℓ ≥ (d+1)/2 + κ.
pub fn make_wendland(d: usize, kappa: f64, ell: f64, a: f64) -> Result<KernelParams> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if !(kappa >= 0.0) {
        return Err(Error::Domain(format!("kappa must be nonnegative, got {kappa}")));
    }
    let h = d as f64 / 2.0;
    let bound = h + 0.5 + kappa;
    if !(ell >= bound) {
        return Err(Error::Domain(format!("ell = {ell} below the lower bound {bound}")));
    }
    let p = KernelParams::new(a, h + 0.5 + kappa, (d as f64 + ell + 1.0) / 2.0 + kappa, (d as f64 + ell) / 2.0 + 1.0 + kappa)?;
    let rep = check_param_space(p.alpha, p.beta, p.gamma, d);
    if !rep.in_space {
        return Err(Error::ParamSpace(format!("Wendland parameters fail {}", rep.failures().join("; "))));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::kernel::cov_eval;

    #[test]
    fn parameterizations() {
        assert_eq!(make_spherical(3, 0.0, 1.0).unwrap().shapes(), (2.0, 2.5, 4.0));
        assert_eq!(make_spherical(3, 1.0, 1.0).unwrap().shapes(), (3.0, 3.5, 6.0));
        let tent = make_spherical(1, 0.0, 2.0).unwrap();
        assert!((cov_eval(&tent, 1, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(make_askey(2, 2.0, 1.0).unwrap().shapes(), (1.5, 2.5, 3.0));
        assert!(make_askey(2, 1.5, 1.0).is_ok());
        assert!(make_askey(2, 1.4, 1.0).is_err());
        assert_eq!(make_wendland(2, 0.0, 2.0, 1.0).unwrap(), make_askey(2, 2.0, 1.0).unwrap());
    }

    #[test]
    fn wendland_closed_form() {
        let p = make_wendland(3, 1.0, 3.0, 1.0).unwrap();
        for i in 0..=20 {
            let u = i as f64 / 20.0;
            let want = (1.0 - u).powi(4) * (4.0 * u + 1.0);
            assert!((cov_eval(&p, 3, u).unwrap() - want).abs() < 1e-12);
        }
    }
}
