use serde::{Deserialize, Serialize};

use super::params::{require_space, KernelParams};
use crate::error::{Error, Result};
use crate::specfun::gamma::{log_gamma, log_gamma_ratio};

/// Finite expansion g(r) = Σ even[n] (r/a)^{2n} + Σ shifted[n] (r/a)^{2n + shift} on [0, a).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedExpansion {
    pub even: Vec<f64>,
    pub shifted: Vec<f64>,
    pub shift: f64,
}

impl TruncatedExpansion {
    pub fn eval(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        let t2 = t * t;
        let even = self.even.iter().rev().fold(0.0, |acc, &c| acc * t2 + c);
        if self.shifted.is_empty() {
            return even;
        }
        let odd = self.shifted.iter().rev().fold(0.0, |acc, &c| acc * t2 + c);
        even + odd * t.powf(self.shift)
    }
}

fn as_count(x: f64) -> Option<usize> {
    let n = x.round();
    ((x - n).abs() < 1e-12 && n >= 0.0).then_some(n as usize)
}

fn factorial_ln(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Coefficients of the finite power expansion, available when β - d/2 = N and γ - α = M are
/// integers (or the same with β and γ exchanged) and α - d/2 is not an integer.
pub fn truncated_poly_coeffs(p: &KernelParams, d: usize) -> Result<TruncatedExpansion> {
    require_space(p.alpha, p.beta, p.gamma, d)?;
    let h = d as f64 / 2.0;
    let nu = p.alpha - h;
    if as_count(nu).is_some() {
        return Err(Error::Precondition(format!("alpha - d/2 = {nu} is an integer")));
    }
    let (n_cnt, m_cnt) = match (as_count(p.beta - h), as_count(p.gamma - p.alpha)) {
        (Some(n), Some(m)) if n >= 1 => (n, m),
        _ => match (as_count(p.gamma - h), as_count(p.beta - p.alpha)) {
            (Some(n), Some(m)) if n >= 1 => (n, m),
            _ => {
                return Err(Error::Precondition(
                    "needs beta - d/2 and gamma - alpha (or gamma - d/2 and beta - alpha) to be integers".into(),
                ))
            }
        },
    };
    let (nf, mf) = (n_cnt as f64, m_cnt as f64);
    let pref = log_gamma_ratio(&[1.0 - nu, nf], &[1.0 - nu - mf])?;
    let sign_n = |n: usize| if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut even = Vec::with_capacity(n_cnt);
    for n in 0..n_cnt {
        let k = n as f64;
        let r = log_gamma_ratio(&[1.0 - nu - mf + k], &[1.0 - nu + k, nf - k])?;
        let ln = pref.ln_abs + r.ln_abs - factorial_ln(n);
        even.push(sign_n(n) * pref.sign * r.sign * ln.exp());
    }
    // the r^{2α-d} part carries the connection coefficient, which equals the naive
    // gamma-ratio prefactor times (-1)^{N+M}
    let parity = sign_n(n_cnt + m_cnt);
    let mut shifted = Vec::with_capacity(m_cnt);
    for n in 0..m_cnt {
        let k = n as f64;
        let num = log_gamma(nu - nf + 1.0 + k)?;
        let r = log_gamma_ratio(&[], &[nu + 1.0 + k, mf - k])?;
        let ln = pref.ln_abs + num.ln_abs + r.ln_abs - factorial_ln(n);
        shifted.push(parity * sign_n(n) * pref.sign * num.sign * r.sign * ln.exp());
    }
    Ok(TruncatedExpansion {
        even,
        shifted,
        shift: 2.0 * nu,
    })
}
