use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsiFamily {
    /// `b x + c - (1 - x/a)_+^(η+1)`, params `[a, b, c, η]`.
    TruncPowerIntegrated,
    /// `1 + ln(1 + x/b)`, params `[b]`.
    LogBernstein,
    /// `(1 + b x^η)^θ`, params `[b, η, θ]`.
    PowerBernstein,
    /// `1 + x (x + b)^(-η)`, params `[b, η]`.
    RationalBernstein,
    /// `c0 + Σ w_k (1 - exp(-λ_k x))`, params `[c0, w1, λ1, w2, λ2, ...]`.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiSpec {
    pub family: PsiFamily,
    pub params: Vec<f64>,
    #[serde(alias = "q")]
    pub monotonicity_order_q: u32,
    #[serde(default)]
    pub upper_bound: Option<f64>,
    #[serde(default)]
    pub anchor_points: Vec<Vec<f64>>,
}

impl PsiSpec {
    pub fn new(family: PsiFamily, params: Vec<f64>, q: u32, anchor_points: Vec<Vec<f64>>) -> Result<Self> {
        let spec = PsiSpec {
            family,
            params,
            monotonicity_order_q: q,
            upper_bound: None,
            anchor_points,
        };
        spec.check_params()?;
        Ok(spec)
    }

    pub fn with_upper_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound > 0.0) {
            return Err(Error::Precondition(format!("upper bound {bound} must be positive")));
        }
        self.upper_bound = Some(bound);
        Ok(self)
    }

    pub fn check_params(&self) -> Result<()> {
        let p = &self.params;
        let bad = |msg: String| Err(Error::Precondition(msg));
        let want = |n: usize| -> Result<()> {
            if p.len() != n {
                return Err(Error::Precondition(format!(
                    "{:?} takes {n} parameters, got {}",
                    self.family,
                    p.len()
                )));
            }
            Ok(())
        };
        if p.iter().any(|v| !v.is_finite()) {
            return bad("non-finite psi parameter".into());
        }
        match self.family {
            PsiFamily::TruncPowerIntegrated => {
                want(4)?;
                let (a, b, c, eta) = (p[0], p[1], p[2], p[3]);
                if !(a > 0.0 && b > 0.0 && c > 1.0) {
                    return bad(format!("need a > 0, b > 0, c > 1; got a={a}, b={b}, c={c}"));
                }
                if eta < self.monotonicity_order_q as f64 {
                    return bad(format!("need eta >= q = {}; got {eta}", self.monotonicity_order_q));
                }
            }
            PsiFamily::LogBernstein => {
                want(1)?;
                if !(p[0] > 0.0) {
                    return bad(format!("need b > 0; got {}", p[0]));
                }
            }
            PsiFamily::PowerBernstein => {
                want(3)?;
                let (b, eta, theta) = (p[0], p[1], p[2]);
                if !(b > 0.0 && eta > 0.0 && eta <= 1.0 && theta > 0.0 && theta <= 1.0) {
                    return bad(format!("need b > 0 and eta, theta in (0,1]; got {b}, {eta}, {theta}"));
                }
            }
            PsiFamily::RationalBernstein => {
                want(2)?;
                if !(p[0] > 0.0 && p[1] > 0.0 && p[1] <= 1.0) {
                    return bad(format!("need b > 0 and eta in (0,1]; got {}, {}", p[0], p[1]));
                }
            }
            PsiFamily::Custom => {
                if p.len() % 2 != 1 {
                    return bad("custom psi takes [c0, w1, l1, ...]".into());
                }
                if p[1..].chunks(2).any(|wl| !(wl[1] > 0.0)) {
                    return bad("custom psi rates must be positive".into());
                }
            }
        }
        Ok(())
    }

    /// Anchor dimension admitted by the monotonicity order.
    pub fn anchor_dim(&self) -> usize {
        2 * self.monotonicity_order_q as usize + 1
    }

    /// Supremum of ψ over the half line.
    pub fn supremum(&self) -> f64 {
        let p = &self.params;
        match self.family {
            PsiFamily::RationalBernstein if p[1] == 1.0 => 2.0,
            PsiFamily::Custom => {
                let mut best = p[0];
                let mut limit = p[0];
                for wl in p[1..].chunks(2) {
                    limit += wl[0];
                }
                best = best.max(limit);
                for k in 0..400 {
                    let x = 10f64.powf(-4.0 + 8.0 * k as f64 / 399.0);
                    best = best.max(psi_value(self, x));
                }
                best
            }
            _ => f64::INFINITY,
        }
    }

    pub fn infimum(&self) -> f64 {
        match self.family {
            PsiFamily::Custom => {
                let mut best = self.params[0];
                for k in 0..400 {
                    let x = 10f64.powf(-4.0 + 8.0 * k as f64 / 399.0);
                    best = best.min(psi_value(self, x));
                }
                let limit: f64 = self.params[0] + self.params[1..].chunks(2).map(|wl| wl[0]).sum::<f64>();
                best.min(limit)
            }
            _ => psi_value(self, 0.0),
        }
    }
}

fn psi_value(spec: &PsiSpec, x: f64) -> f64 {
    let p = &spec.params;
    match spec.family {
        PsiFamily::TruncPowerIntegrated => {
            let (a, b, c, eta) = (p[0], p[1], p[2], p[3]);
            let base = (1.0 - x / a).max(0.0);
            b * x + c - base.powf(eta + 1.0)
        }
        PsiFamily::LogBernstein => 1.0 + (x / p[0]).ln_1p(),
        PsiFamily::PowerBernstein => (1.0 + p[0] * x.powf(p[1])).powf(p[2]),
        PsiFamily::RationalBernstein => 1.0 + x * (x + p[0]).powf(-p[1]),
        PsiFamily::Custom => {
            let mut s = p[0];
            for wl in p[1..].chunks(2) {
                s -= wl[0] * (-wl[1] * x).exp_m1();
            }
            s
        }
    }
}

pub fn psi_eval(spec: &PsiSpec, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("psi argument {x} must be nonnegative")));
    }
    spec.check_params()?;
    Ok(psi_value(spec, x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiCheckReport {
    pub family: PsiFamily,
    pub q: u32,
    /// Catalog families are certified from their parameter bounds.
    pub analytic: bool,
    pub passed: bool,
    pub numeric_passed: bool,
    /// Largest scaled sign violation of the finite differences (0 when none).
    pub worst_violation: f64,
    pub messages: Vec<String>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Sign pattern of forward differences of ψ of orders 1..q+2 on a log grid.
fn numeric_sweep(spec: &PsiSpec) -> (bool, f64, Vec<String>) {
    let q = spec.monotonicity_order_q as usize;
    let mut worst = 0.0f64;
    let mut messages = Vec::new();
    let mut xs = vec![0.0];
    xs.extend((0..240).map(|k| 10f64.powf(-4.0 + 7.0 * k as f64 / 239.0)));
    for &x in &xs {
        let h = (0.02 * x).max(1e-5);
        for m in 1..=q + 2 {
            let mut diff = 0.0;
            let mut mag = 0.0;
            for j in 0..=m {
                let v = binomial(m, j) * psi_value(spec, x + j as f64 * h);
                diff += if (m - j) % 2 == 0 { v } else { -v };
                mag += v.abs();
            }
            let signed = if m % 2 == 1 { diff } else { -diff };
            let tol = 64.0 * f64::EPSILON * mag;
            if signed < -tol {
                let v = -signed / mag.max(f64::MIN_POSITIVE);
                if v > worst {
                    worst = v;
                }
                if messages.len() < 5 {
                    messages.push(format!("order {m} difference has the wrong sign at x={x:e}"));
                }
            }
        }
    }
    (worst == 0.0, worst, messages)
}

pub fn psi_check(spec: &PsiSpec) -> Result<PsiCheckReport> {
    spec.check_params()?;
    let (numeric_passed, worst_violation, mut messages) = numeric_sweep(spec);
    let analytic = spec.family != PsiFamily::Custom;
    let mut passed = if analytic { true } else { numeric_passed };
    if spec.infimum() <= 0.0 {
        passed = false;
        messages.push("psi is not positive".into());
    }
    if let Some(ub) = spec.upper_bound {
        let sup = spec.supremum();
        if sup > ub * (1.0 + 1e-12) {
            passed = false;
            messages.push(format!("supremum {sup} exceeds the upper bound {ub}"));
        }
    }
    Ok(PsiCheckReport {
        family: spec.family,
        q: spec.monotonicity_order_q,
        analytic,
        passed,
        numeric_passed,
        worst_violation,
        messages,
    })
}
