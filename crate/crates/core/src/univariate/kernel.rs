use serde::{Deserialize, Serialize};

use super::params::{ln_zeta, require_space, KernelParams};
use crate::error::{Error, Result};
use crate::specfun::bessel::bessel_j;
use crate::specfun::gamma::ln_gamma_pos;
use crate::specfun::hypergeom::{hyp1f2_neg, hyp2f1_scaled, PrecisionBudget};

/// Radial part g_d(t·a) as a function of t = r/a, requiring only that the closed form is defined
/// (α, β, γ > d/2 and β + γ - α > d/2).
pub fn g_radial(alpha: f64, beta: f64, gamma: f64, d: usize, t: f64) -> Result<f64> {
    let h = d as f64 / 2.0;
    if !(alpha > h && beta > h && gamma > h && beta > alpha && gamma > alpha) {
        return Err(Error::Precondition(format!(
            "closed form undefined for ({alpha}, {beta}, {gamma}) in dimension {d}"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("radius must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    if t >= 1.0 {
        return Ok(0.0);
    }
    let x = (1.0 - t) * (1.0 + t);
    let c = beta - alpha + gamma - h;
    let ln_pref = ln_gamma_pos(beta - h) + ln_gamma_pos(gamma - h) - ln_gamma_pos(alpha - h);
    let ln_x = (-t * t).ln_1p();
    hyp2f1_scaled(
        beta - alpha,
        gamma - alpha,
        c,
        x,
        t * t,
        |cc| ln_pref - ln_gamma_pos(cc) + (cc - 1.0) * ln_x,
        PrecisionBudget::tight(),
    )
}

/// Covariance σ²·G_d at distance r.
pub fn cov_eval(p: &KernelParams, d: usize, r: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    require_space(p.alpha, p.beta, p.gamma, d)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    if r >= p.a {
        return Ok(0.0);
    }
    if r == 0.0 {
        return Ok(p.sigma2);
    }
    Ok(p.sigma2 * g_radial(p.alpha, p.beta, p.gamma, d, r / p.a)?)
}

/// Spectral density σ²·ζ_d·₁F₂(α; β, γ; -(π a u)²) at frequency norm u.
pub fn spectral_eval(p: &KernelParams, d: usize, u: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    require_space(p.alpha, p.beta, p.gamma, d)?;
    spectral_unchecked(p, d, u)
}

pub(crate) fn spectral_unchecked(p: &KernelParams, d: usize, u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("frequency must be nonnegative, got {u}")));
    }
    let z = std::f64::consts::PI * p.a * u;
    let f = hyp1f2_neg(p.alpha, p.beta, p.gamma, z * z)?;
    Ok(p.sigma2 * f * ln_zeta(p.a, p.alpha, p.beta, p.gamma, d)?.exp())
}

/// Squared-Bessel closed form of the spectral density of the spherical family with
/// α = (d+1)/2 + κ, β = d/2 + 1 + κ, γ = d + 1 + 2κ.
pub fn spherical_spectral(d: usize, kappa: f64, a: f64, u: f64) -> Result<f64> {
    let h = d as f64 / 2.0;
    let p = KernelParams::new(a, h + 0.5 + kappa, h + 1.0 + kappa, d as f64 + 1.0 + 2.0 * kappa)?;
    let lz = ln_zeta(a, p.alpha, p.beta, p.gamma, d)?;
    let z = std::f64::consts::PI * a * u;
    if z == 0.0 {
        return Ok(lz.exp());
    }
    let nu = h + kappa;
    let j = bessel_j(nu, z)?;
    Ok(j * j * (lz + 2.0 * ln_gamma_pos(nu + 1.0) - 2.0 * nu * (0.5 * z).ln()).exp())
}

/// Differentiability orders at the origin and at the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub k_origin: u32,
    pub k_range: u32,
    pub ms_diff_order: u32,
}

// largest integer k >= 0 with k < x, for x > 0
fn strict_floor(x: f64) -> u32 {
    (x.ceil() - 1.0).max(0.0) as u32
}

pub fn smoothness(p: &KernelParams, d: usize) -> Result<SmoothnessReport> {
    require_space(p.alpha, p.beta, p.gamma, d)?;
    let h = d as f64 / 2.0;
    let k_origin = strict_floor(2.0 * p.alpha - d as f64);
    let k_range = strict_floor(p.beta - p.alpha + p.gamma - h - 1.0);
    Ok(SmoothnessReport {
        k_origin,
        k_range,
        ms_diff_order: k_origin / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(a: f64, al: f64, be: f64, ga: f64) -> KernelParams {
        KernelParams::new(a, al, be, ga).unwrap()
    }

    #[test]
    fn spherical_and_askey_values() {
        let p = kp(1.0, 2.0, 2.5, 4.0);
        assert!((cov_eval(&p, 3, 0.5).unwrap() - 0.3125).abs() < 1e-14);
        assert_eq!(cov_eval(&p, 3, 0.0).unwrap(), 1.0);
        assert_eq!(cov_eval(&p, 3, 1.2).unwrap(), 0.0);
        let p = kp(1.0, 1.5, 2.5, 3.0);
        assert!((cov_eval(&p, 2, 0.25).unwrap() - 0.5625).abs() < 1e-14);
        let p = KernelParams::with_sigma2(2.0, 1.0, 1.5, 2.0, 3.0).unwrap();
        assert!((cov_eval(&p, 1, 1.0).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn reference_values() {
        let cases = [
            (2, 1.2, 1.7, 5.0, 0.6, 0.045_792_662_300_151_350_683),
            (1, 0.6, 3.0, 1.6, 0.4, 0.074_026_591_518_729_383_254),
            (3, 2.2, 4.0, 6.5, 0.9, 4.100_873_263_918_713_745_6e-6),
            (1, 1.5, 2.5, 4.0, 0.3, 0.506_223_285_187_074_824_05),
        ];
        for (d, al, be, ga, t, want) in cases {
            let got = g_radial(al, be, ga, d, t).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "d={d} ({al},{be},{ga}) t={t}: {got}");
        }
    }

    #[test]
    fn rejects_outside_region() {
        let p = kp(1.0, 2.0, 2.1, 2.1);
        assert!(matches!(cov_eval(&p, 3, 0.5), Err(Error::ParamSpace(_))));
        assert!(spectral_eval(&p, 3, 0.5).is_err());
    }

    #[test]
    fn spectral_values() {
        let p = kp(1.0, 1.0, 2.0, 2.0);
        assert!((spectral_eval(&p, 1, 0.0).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let v = spectral_eval(&p, 1, 0.3).unwrap();
        assert!((v - 0.627_278_956_299_997_115_5).abs() < 1e-13, "{v}");
        let p = kp(1.0, 2.0, 2.5, 4.0);
        let v = spectral_eval(&p, 3, 25.0 / std::f64::consts::PI).unwrap();
        assert!((v - 1.197_934_259_067_455_340_2e-5).abs() < 1e-15, "{v}");
    }

    #[test]
    fn spherical_spectral_matches_general_form() {
        for d in 1..=3 {
            for kappa in 0..=2 {
                let h = d as f64 / 2.0;
                let k = kappa as f64;
                let p = kp(1.3, h + 0.5 + k, h + 1.0 + k, d as f64 + 1.0 + 2.0 * k);
                for &u in &[0.0, 0.05, 0.4, 1.1, 3.7] {
                    let a = spectral_eval(&p, d, u).unwrap();
                    let b = spherical_spectral(d, k, 1.3, u).unwrap();
                    assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "d={d} κ={kappa} u={u}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn smoothness_orders() {
        let s = smoothness(&kp(1.0, 2.0, 2.5, 4.0), 3).unwrap();
        assert_eq!((s.k_origin, s.k_range, s.ms_diff_order), (0, 1, 0));
        for k in 0..5 {
            let d = 2;
            let alpha = (d + k + 1) as f64 / 2.0;
            let s = smoothness(&kp(1.0, alpha, alpha + 6.0, alpha + 6.0), d).unwrap();
            assert_eq!(s.k_origin, k as u32);
        }
    }
}
