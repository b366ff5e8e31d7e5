use std::f64::consts::PI;

use super::QuadratureSpec;
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::specfun::bessel::bessel_j;
use crate::specfun::hypergeom::hyp1f2_neg;
use crate::univariate::{zeta_normalizer, KernelParams};

/// k-th positive zero of J_ν (k ≥ 1): McMahon start, Newton polish.
fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    let b = (k as f64 + 0.5 * nu - 0.25) * PI;
    let m = 4.0 * nu * nu;
    let mut x = b - (m - 1.0) / (8.0 * b) - 4.0 * (m - 1.0) * (7.0 * m - 31.0) / (3.0 * (8.0 * b).powi(3));
    if k == 1 && nu > 0.0 {
        x = x.max(nu + 1.8557571 * nu.cbrt() + 1.0);
    }
    for _ in 0..60 {
        let j = bessel_j(nu, x)?;
        let dj = nu / x * j - bessel_j(nu + 1.0, x)?;
        let step = j / dj;
        x -= step;
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    Ok(x)
}

/// Wynn epsilon extrapolation of a sequence of partial sums; stops at the last even column
/// before a breakdown (vanishing difference).
fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    let mut prev = vec![0.0; n + 1];
    let mut cur = s.to_vec();
    let mut best = s[n - 1];
    for k in 1..n {
        let mut next = Vec::with_capacity(n - k);
        for i in 0..n - k {
            let diff = cur[i + 1] - cur[i];
            if diff.abs() <= 1e-15 * cur[i + 1].abs().max(1e-300) {
                return best;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        if k % 2 == 0 {
            let v = *next.last().expect("nonempty");
            if !v.is_finite() {
                return best;
            }
            best = v;
        }
        prev = cur;
        cur = next;
    }
    best
}

/// Covariance at r > 0 rebuilt from the spectral density by the order-d Hankel transform,
/// integrated lobe by lobe between zeros of J_{d/2-1} with Wynn acceleration of the lobe sums.
pub fn hankel_roundtrip(p: &KernelParams, d: usize, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let zeta = zeta_normalizer(p, d)?;
    let h = d as f64 / 2.0;
    let nu = h - 1.0;
    let pref = 2.0 * PI * zeta * r.powf(1.0 - h) * (2.0 * PI * r).powf(-h - 1.0);
    let ratio = p.a / (2.0 * r);
    let (al, be, ga) = p.shapes();
    let f = |y: f64| -> Result<f64> {
        let z = ratio * y;
        Ok(y.powf(h) * bessel_j(nu, y)? * hyp1f2_neg(al, be, ga, z * z)?)
    };
    let n = 24 + 12 * (p.a / r).ceil().min(40.0) as usize;
    let rule = gauss_legendre(n);
    let mut sums = Vec::new();
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut last_est: Option<f64> = None;
    let mut stable = 0;
    for k in 1..=spec.max_subdivisions {
        let hi = bessel_zero(nu, k)?;
        let w = hi - lo;
        let mut lobe = 0.0;
        for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
            lobe += wt * f(lo + w * x)?;
        }
        total += lobe * w;
        sums.push(total);
        lo = hi;
        if k >= 24 && k % 4 == 0 {
            let tail = &sums[sums.len().saturating_sub(40)..];
            let est = wynn_epsilon(tail);
            if let Some(prev) = last_est {
                if (est - prev).abs() * pref.abs() <= spec.abs_tol {
                    stable += 1;
                    if stable >= 3 {
                        return Ok(p.sigma2 * pref * est);
                    }
                } else {
                    stable = 0;
                }
            }
            last_est = Some(est);
        }
    }
    Err(Error::NonConvergence {
        terms: sums.len(),
        last_term: last_est.unwrap_or(total) * pref,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::{cov_eval, make_spherical};

    #[test]
    fn zeros() {
        assert!((bessel_zero(0.0, 1).unwrap() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((bessel_zero(-0.5, 3).unwrap() - 2.5 * PI).abs() < 1e-12);
        assert!((bessel_zero(0.5, 2).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn tent_kernel() {
        let p = make_spherical(1, 0.0, 1.0).unwrap();
        let v = hankel_roundtrip(&p, 1, 0.3, &QuadratureSpec::hankel()).unwrap();
        assert!((v - 0.7).abs() < 1e-6, "{v}");
        let v = hankel_roundtrip(&p, 1, 1.3, &QuadratureSpec::hankel()).unwrap();
        assert!(v.abs() < 1e-6, "{v}");
    }

    #[test]
    fn generic_instance() {
        let p = KernelParams::new(1.0, 2.2, 3.0, 4.5).unwrap();
        for (d, r) in [(2, 0.4), (3, 0.7)] {
            let v = hankel_roundtrip(&p, d, r, &QuadratureSpec::hankel()).unwrap();
            let c = cov_eval(&p, d, r).unwrap();
            assert!((v - c).abs() < 1e-6, "{d} {r}: {v} {c}");
        }
    }
}
