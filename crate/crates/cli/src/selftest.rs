use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypercov::multivariate::{is_cnd, CND_TOL};
use hypercov::oracles::{
    convergence_harness, cov_eval_integral, cov_eval_mixture, gram, hankel_roundtrip, mixture_identity_check,
    QuadratureSpec,
};
use hypercov::univariate::{
    check_param_space, cov_eval, make_askey, make_spherical, make_wendland, spectral_eval, KernelParams, LimitFamily,
    LimitKernelSpec,
};
use hypercov::Result;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn grid() -> impl Iterator<Item = f64> {
    (0..=120).map(|k| k as f64 / 100.0)
}

fn max_dev(p: &KernelParams, d: usize, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for r in grid() {
        worst = worst.max((cov_eval(p, d, r)? - f(r)).abs());
    }
    Ok(worst)
}

fn bound(name: &'static str, value: Result<f64>, tol: f64) -> CheckOutcome {
    match value {
        Ok(v) => CheckOutcome {
            name,
            passed: v <= tol,
            detail: format!("{v:e} <= {tol:e}"),
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn flag(name: &'static str, value: Result<(bool, String)>) -> CheckOutcome {
    match value {
        Ok((passed, detail)) => CheckOutcome { name, passed, detail },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn three_paths() -> Result<f64> {
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for (d, al, be, ga) in [(1, 1.0, 2.5, 3.0), (2, 1.5, 2.5, 3.0), (3, 2.0, 2.5, 4.0), (2, 2.3, 4.1, 3.7)] {
        let p = KernelParams::new(1.3, al, be, ga)?;
        for r in [0.1, 0.45, 0.9, 1.2] {
            let c = cov_eval(&p, d, r)?;
            worst = worst
                .max((c - cov_eval_integral(&p, d, r, &spec)?).abs())
                .max((c - cov_eval_mixture(&p, d, r, &spec)?).abs());
        }
    }
    Ok(worst)
}

fn spectral_nonneg() -> Result<(bool, String)> {
    let p = KernelParams::new(1.0, 1.6, 2.2, 3.1)?;
    let s0 = spectral_eval(&p, 2, 0.0)?;
    let mut lowest = f64::INFINITY;
    for k in 0..400 {
        lowest = lowest.min(spectral_eval(&p, 2, k as f64 * 0.05)?);
    }
    Ok((lowest >= -1e-10 * s0, format!("min {lowest:e}, at zero {s0:e}")))
}

fn gram_psd() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pts: Vec<Vec<f64>> = (0..60).map(|_| vec![rng.gen::<f64>() * 3.0, rng.gen::<f64>() * 3.0]).collect();
    let p = KernelParams::new(1.0, 1.5, 2.5, 3.0)?;
    let g = gram(&pts, &p, 2)?;
    Ok((g.psd && g.min_eig > 0.0, format!("eigenvalues in [{:e}, {:e}]", g.min_eig, g.max_eig)))
}

fn cnd_examples() -> Result<(bool, String)> {
    let x: [f64; 4] = [0.0, 0.4, 1.1, 2.5];
    let v = DMatrix::from_fn(4, 4, |i, j| (x[i] - x[j]).abs());
    let ones = DMatrix::from_element(4, 4, 1.0);
    let bad = DMatrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { -1.0 });
    let ok = is_cnd(&v, CND_TOL)?.cnd && is_cnd(&ones, CND_TOL)?.cnd && !is_cnd(&bad, CND_TOL)?.cnd;
    Ok((ok, "variogram, constant and negated off-diagonal matrices".into()))
}

fn param_space() -> Result<(bool, String)> {
    let inside = check_param_space(2.0, 2.5, 4.0, 3);
    let outside = check_param_space(2.0, 2.1, 2.1, 3);
    Ok((
        inside.in_space && !outside.in_space && !outside.cond_product,
        format!("{:?}", outside.failures()),
    ))
}

fn hankel() -> Result<f64> {
    let spec = QuadratureSpec::hankel();
    let mut worst = 0.0f64;
    for (d, al, be, ga) in [(1, 1.0, 2.5, 3.0), (3, 2.0, 2.5, 4.0)] {
        let p = KernelParams::new(1.0, al, be, ga)?;
        for r in [0.3, 0.7] {
            worst = worst.max((hankel_roundtrip(&p, d, r, &spec)? - cov_eval(&p, d, r)?).abs());
        }
    }
    Ok(worst)
}

fn matern_trace() -> Result<(bool, String)> {
    let t = LimitKernelSpec::new(LimitFamily::Matern, 1.0, 0.5, 0.0)?;
    let tr = convergence_harness(&t, 4, 1)?;
    Ok((tr.nonincreasing, format!("{:?}", tr.sup_errors)))
}

/// Runs the fast oracle checks, and the slow ones as well when `nightly` is set.
pub fn run_checks(nightly: bool) -> Vec<CheckOutcome> {
    let mut out = vec![
        bound(
            "spherical_closed_form",
            make_spherical(3, 0.0, 1.0).and_then(|p| max_dev(&p, 3, |u| (1.0 - 1.5 * u + 0.5 * u.powi(3)).max(0.0) * f64::from(u < 1.0))),
            1e-10,
        ),
        bound(
            "askey_closed_form",
            make_askey(2, 2.0, 1.0).and_then(|p| max_dev(&p, 2, |u| (1.0 - u).max(0.0).powi(2))),
            1e-10,
        ),
        bound(
            "wendland_closed_form",
            make_wendland(3, 1.0, 3.0, 1.0).and_then(|p| max_dev(&p, 3, |u| (1.0 - u).max(0.0).powi(4) * (4.0 * u + 1.0))),
            1e-9,
        ),
        bound("three_path_agreement", three_paths(), 1e-7),
        bound(
            "mixture_identity",
            mixture_identity_check(1.7, 2.9, 3.4, &(0..=40).map(|k| k as f64 * 0.5).collect::<Vec<_>>()),
            1e-8,
        ),
        flag("spectral_nonnegative", spectral_nonneg()),
        flag("gram_psd", gram_psd()),
        flag("cnd_examples", cnd_examples()),
        flag("param_space", param_space()),
    ];
    if nightly {
        out.push(bound("hankel_roundtrip", hankel(), 1e-6));
        out.push(flag("matern_convergence", matern_trace()));
    }
    out
}
