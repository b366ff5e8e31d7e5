use crate::error::{Error, Result};
use crate::quad::gauss_jacobi;
use crate::specfun::bessel::hyp0f1_neg;
use crate::specfun::gamma::ln_gamma_pos;
use crate::specfun::hypergeom::{hyp1f2_neg, hyp1f2_series};

/// Largest gap over `x_grid` (values of π a ρ) between the ₁F₂ series and its beta mixture of ₀F₁.
pub fn mixture_identity_check(alpha: f64, beta: f64, gamma: f64, x_grid: &[f64]) -> Result<f64> {
    if !(beta > alpha && alpha > 0.0 && gamma > 0.0) {
        return Err(Error::Precondition(format!(
            "need beta > alpha > 0 and gamma > 0, got ({alpha}, {beta}, {gamma})"
        )));
    }
    let norm = (ln_gamma_pos(beta) - ln_gamma_pos(alpha) - ln_gamma_pos(beta - alpha)).exp();
    let zmax = x_grid.iter().fold(0.0f64, |acc, &z| acc.max(z.abs()));
    let n = (80 + (6.0 * zmax) as usize).min(600);
    let rule = gauss_jacobi(n, alpha - 1.0, beta - alpha - 1.0);
    let mut worst = 0.0f64;
    for &z in x_grid {
        let lhs = hyp1f2_series(alpha, beta, gamma, z * z)?;
        let mut rhs = 0.0;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            rhs += w * hyp0f1_neg(gamma, t * z * z)?;
        }
        worst = worst.max((lhs - norm * rhs).abs());
    }
    Ok(worst)
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b)
}

/// Gap between the double beta integral of ₁F₂(α;β,γ;-t₁t₂(ax)²) and its closed form
/// B(β,β_ij-β) B(γ,γ_ij-γ) ₁F₂(α;β_ij,γ_ij;-(ax)²), both divided by the beta factors.
pub fn term_integration_identity_check(
    alpha: f64,
    beta: f64,
    gamma: f64,
    beta_ij: f64,
    gamma_ij: f64,
    a: f64,
    x: f64,
) -> Result<f64> {
    if !(beta > 0.0 && gamma > 0.0 && alpha > 0.0) {
        return Err(Error::Precondition(format!("need positive shapes, got ({alpha}, {beta}, {gamma})")));
    }
    if beta_ij - beta < 1e-8 {
        return Err(Error::Pole(beta_ij - beta));
    }
    if gamma_ij - gamma < 1e-8 {
        return Err(Error::Pole(gamma_ij - gamma));
    }
    let z2 = (a * x).powi(2);
    let n = (60 + (8.0 * (a * x).abs()) as usize).min(400);
    let r1 = gauss_jacobi(n, beta - 1.0, beta_ij - beta - 1.0);
    let r2 = gauss_jacobi(n, gamma - 1.0, gamma_ij - gamma - 1.0);
    let mut lhs = 0.0;
    for (&t1, &w1) in r1.nodes.iter().zip(&r1.weights) {
        let mut inner = 0.0;
        for (&t2, &w2) in r2.nodes.iter().zip(&r2.weights) {
            inner += w2 * hyp1f2_neg(alpha, beta, gamma, t1 * t2 * z2)?;
        }
        lhs += w1 * inner;
    }
    let scale = (ln_beta(beta, beta_ij - beta) + ln_beta(gamma, gamma_ij - gamma)).exp();
    let rhs = hyp1f2_neg(alpha, beta_ij, gamma_ij, z2)?;
    Ok((lhs / scale - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixture_identity() {
        let grid: Vec<f64> = (0..=40).map(|k| 0.5 * k as f64).collect();
        assert!(mixture_identity_check(2.0, 2.5, 4.0, &grid).unwrap() <= 1e-8);
        assert!(mixture_identity_check(2.0, 2.5, 4.0, &[0.0]).unwrap() < 1e-14);
        assert!(mixture_identity_check(0.7, 3.1, 1.0, &grid).unwrap() <= 1e-8);
    }

    #[test]
    fn term_integration() {
        assert!(term_integration_identity_check(2.0, 2.9, 3.9, 3.0, 4.0, 1.0, 0.0).unwrap() < 1e-12);
        let dev = term_integration_identity_check(1.2, 2.1, 2.6, 3.4, 5.0, 1.5, 2.3).unwrap();
        assert!(dev <= 1e-7, "{dev}");
        assert!(matches!(
            term_integration_identity_check(1.2, 2.1, 2.6, 2.1, 5.0, 1.5, 2.3),
            Err(Error::Pole(_))
        ));
    }
}
