use super::QuadratureSpec;
use crate::error::{Error, Result};
use crate::quad::integrate_gk;
use crate::specfun::gamma::ln_gamma_pos;
use crate::univariate::{check_param_space, KernelParams};

/// ∫₀¹ s^p (1-s)^q h(s, 1-s) ds with both endpoint powers removed by s = v^{1/(p+1)}-type maps.
fn jacobi_integral(p: f64, q: f64, h: impl Fn(f64, f64) -> f64, abs_tol: f64, spec: &QuadratureSpec) -> Result<f64> {
    let ep = 1.0 / (p + 1.0);
    let eq = 1.0 / (q + 1.0);
    let left = |v: f64| {
        let s = 0.5 * v.powf(ep);
        (1.0 - s).powf(q) * h(s, 1.0 - s)
    };
    let right = |w: f64| {
        let sc = 0.5 * w.powf(eq);
        (1.0 - sc).powf(p) * h(1.0 - sc, sc)
    };
    let (l, _) = integrate_gk(left, 0.0, 1.0, 0.5 * abs_tol, 0.0, spec.max_subdivisions)?;
    let (r, _) = integrate_gk(right, 0.0, 1.0, 0.5 * abs_tol, 0.0, spec.max_subdivisions)?;
    Ok(0.5f64.powf(p + 1.0) * ep * l + 0.5f64.powf(q + 1.0) * eq * r)
}

fn prepare(p: &KernelParams, d: usize, r: f64) -> Result<Option<f64>> {
    let rep = check_param_space(p.alpha, p.beta, p.gamma, d);
    if d == 0 || !rep.in_space {
        return Err(Error::ParamSpace(format!(
            "({}, {}, {}) outside the region for d = {d}: {}",
            p.alpha,
            p.beta,
            p.gamma,
            rep.failures().join("; ")
        )));
    }
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    if r >= p.a {
        return Ok(Some(0.0));
    }
    if r == 0.0 {
        return Ok(Some(p.sigma2));
    }
    Ok(None)
}

/// Covariance from the finite integral over t ∈ [(r/a)², 1].
pub fn cov_eval_integral(p: &KernelParams, d: usize, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if let Some(v) = prepare(p, d, r)? {
        return Ok(v);
    }
    let h = d as f64 / 2.0;
    let (al, be, ga) = p.shapes();
    let x = (r / p.a).powi(2);
    let xc = (1.0 - r / p.a) * (1.0 + r / p.a);
    let c = be - al + ga - h;
    let ln_pref = ln_gamma_pos(be - h) - ln_gamma_pos(al - h) - ln_gamma_pos(be - al) + (c - 1.0) * xc.ln();
    let pref = ln_pref.exp();
    let tol = spec.abs_tol / pref.max(1e-300);
    let inner = jacobi_integral(ga - h - 1.0, be - al - 1.0, |s, _| (x + xc * s).powf(al - ga), tol, spec)?;
    Ok(p.sigma2 * pref * inner)
}

/// Covariance from the beta mixture of generalized Cauchy times powered quadratic functions.
pub fn cov_eval_mixture(p: &KernelParams, d: usize, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if let Some(v) = prepare(p, d, r)? {
        return Ok(v);
    }
    let h = d as f64 / 2.0;
    let (al, be, ga) = p.shapes();
    let x = (r / p.a).powi(2);
    let xc = (1.0 - r / p.a) * (1.0 + r / p.a);
    let c = be - al + ga - h;
    let ln_pref = ln_gamma_pos(ga - h) - ln_gamma_pos(ga - al) - ln_gamma_pos(al - h) + (c - 1.0) * xc.ln();
    let pref = ln_pref.exp();
    let tol = spec.abs_tol / pref.max(1e-300);
    let inner = jacobi_integral(ga - al - 1.0, be - h - 1.0, |t, tc| (tc + t * x).powf(al - be), tol, spec)?;
    Ok(p.sigma2 * pref * inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::cov_eval;

    #[test]
    fn spherical_value() {
        let p = KernelParams::new(1.0, 2.0, 2.5, 4.0).unwrap();
        let q = QuadratureSpec::default();
        assert!((cov_eval_integral(&p, 3, 0.5, &q).unwrap() - 0.3125).abs() < 1e-11);
        assert!((cov_eval_mixture(&p, 3, 0.5, &q).unwrap() - 0.3125).abs() < 1e-11);
        assert!(cov_eval_integral(&p, 3, 1.0 - 1e-9, &q).unwrap().abs() < 1e-9);
        assert_eq!(cov_eval_mixture(&p, 3, 0.0, &q).unwrap(), 1.0);
    }

    #[test]
    fn agrees_with_closed_form() {
        let q = QuadratureSpec::default();
        for (d, al, be, ga) in [(1, 0.7, 1.9, 2.4), (2, 1.3, 2.2, 5.0), (3, 2.6, 3.1, 7.5), (2, 3.0, 8.0, 4.0)] {
            let p = KernelParams::new(1.7, al, be, ga).unwrap();
            for r in [0.05, 0.4, 1.1, 1.6] {
                let c = cov_eval(&p, d, r).unwrap();
                let i = cov_eval_integral(&p, d, r, &q).unwrap();
                let m = cov_eval_mixture(&p, d, r, &q).unwrap();
                assert!((c - i).abs() < 1e-9 && (c - m).abs() < 1e-9, "{d} {al} {be} {ga} {r}: {c} {i} {m}");
            }
        }
    }
}
