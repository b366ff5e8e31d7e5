use super::bessel::hyp0f1_neg;
use super::gamma::{ln_gamma_pos, log_gamma_ratio, SignedLog};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::quad::{gauss_jacobi, gauss_legendre};
use serde::{Deserialize, Serialize};

/// Truncation control for hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionBudget {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        PrecisionBudget {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_terms: 10_000,
        }
    }
}

impl PrecisionBudget {
    /// Tolerances at the limit of double precision, used by the kernel formulas.
    pub fn tight() -> Self {
        PrecisionBudget {
            rel_tol: 1e-18,
            abs_tol: 1e-300,
            max_terms: 200_000,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_terms == 0 {
            return Err(Error::Precondition(format!("invalid precision budget {self:?}")));
        }
        Ok(())
    }
}

/// Upper and lower parameters of a pFq series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypParams {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

impl HypParams {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>) -> Result<Self> {
        if let Some(b) = lower.iter().find(|&&b| is_nonpositive_integer(b)) {
            return Err(Error::Pole(*b));
        }
        Ok(HypParams { upper, lower })
    }

    fn terminating(&self) -> bool {
        self.upper.iter().any(|&a| is_nonpositive_integer(a))
    }
}

/// A truncated series value with its achieved error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub error: f64,
    pub terms: usize,
}

// Series sum kept as mantissa × exp(ln_scale) so that huge positive series do not overflow.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledSum {
    pub sum: Dd,
    pub ln_scale: f64,
    pub max_term: f64,
    pub terms: usize,
}

impl ScaledSum {
    pub fn value(&self) -> f64 {
        self.sum.to_f64() * self.ln_scale.exp()
    }

    /// Rounding error of the double-double accumulation plus the last retained term.
    pub fn error(&self, last: f64) -> f64 {
        ((self.max_term * self.terms as f64 * 1e-31) + last.abs()) * self.ln_scale.exp()
    }

    /// Relative error estimate; large when cancellation ate the significant digits.
    pub fn rel_error(&self) -> f64 {
        let s = self.sum.to_f64().abs();
        if s == 0.0 {
            return f64::INFINITY;
        }
        self.max_term * self.terms as f64 * 1e-31 / s
    }
}

const RESCALE: f64 = 1e200;

pub(crate) fn series_scaled(
    upper: &[f64],
    lower: &[f64],
    x: f64,
    budget: &PrecisionBudget,
) -> Result<(ScaledSum, f64)> {
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut ln_scale = 0.0;
    let mut max_term = 1.0f64;
    let mut small = 0;
    let xd = Dd::new(x);
    let mut last = 1.0;
    let mut n = 0usize;
    if x == 0.0 {
        return Ok((
            ScaledSum {
                sum,
                ln_scale,
                max_term,
                terms: 1,
            },
            0.0,
        ));
    }
    loop {
        if n >= budget.max_terms {
            return Err(Error::NonConvergence {
                terms: n,
                last_term: last,
            });
        }
        let nf = n as f64;
        let mut num = xd;
        for &a in upper {
            num = num * Dd::new(a).add_f64(nf);
        }
        let mut den = Dd::new(nf + 1.0);
        for &b in lower {
            den = den * Dd::new(b).add_f64(nf);
        }
        term = term * num / den;
        sum = sum + term;
        n += 1;
        let t = term.hi.abs();
        last = term.hi;
        if t > max_term {
            max_term = t;
        }
        if sum.hi.abs() > RESCALE || t > RESCALE {
            sum = sum.mul_f64(1.0 / RESCALE);
            term = term.mul_f64(1.0 / RESCALE);
            max_term /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        if term.hi == 0.0 {
            break;
        }
        let abs_tol = budget.abs_tol * (-ln_scale).exp();
        if t <= abs_tol + budget.rel_tol * sum.hi.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    Ok((
        ScaledSum {
            sum,
            ln_scale,
            max_term,
            terms: n + 1,
        },
        last,
    ))
}

/// Generalized hypergeometric series pFq(upper; lower; x).
pub fn hyp_pfq(params: &HypParams, x: f64, budget: PrecisionBudget) -> Result<SeriesValue> {
    budget.check()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {x}")));
    }
    if let Some(b) = params.lower.iter().find(|&&b| is_nonpositive_integer(b)) {
        return Err(Error::Pole(*b));
    }
    if x == 0.0 {
        return Ok(SeriesValue {
            value: 1.0,
            error: 0.0,
            terms: 1,
        });
    }
    let k = params.upper.len();
    let kp = params.lower.len();
    if !params.terminating() {
        if k == kp + 1 {
            let excess: f64 = params.lower.iter().sum::<f64>() - params.upper.iter().sum::<f64>();
            if x.abs() > 1.0 || (x.abs() == 1.0 && !(excess > 0.0)) {
                return Err(Error::Domain(format!(
                    "{k}F{kp} series diverges at x = {x}"
                )));
            }
        } else if k > kp + 1 {
            return Err(Error::Domain(format!("{k}F{kp} series diverges for x != 0")));
        }
    }
    let (s, last) = series_scaled(&params.upper, &params.lower, x, &budget)?;
    let value = s.value();
    if !value.is_finite() {
        return Err(Error::Domain(format!("series value overflows at x = {x}")));
    }
    Ok(SeriesValue {
        value,
        error: s.error(last),
        terms: s.terms,
    })
}

fn near_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() < tol
}

pub(crate) const LOG_CASE_EPS: f64 = 1.0 / 1024.0;
pub(crate) const LOG_CASE_TOL: f64 = 2.0 * LOG_CASE_EPS;

/// Value at offset `delta` from a removable singularity, by quintic interpolation of
/// f(s) sampled at s = ±ε, ±2ε, ±3ε. ε is a power of two so shifted integer parameters stay exact.
pub(crate) fn across_integer(delta: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let e = LOG_CASE_EPS;
    let nodes = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0];
    let t = delta / e;
    let mut total = 0.0;
    for (i, &si) in nodes.iter().enumerate() {
        let mut w = 1.0;
        for (j, &sj) in nodes.iter().enumerate() {
            if i != j {
                w *= (t - sj) / (si - sj);
            }
        }
        total += w * f(si * e)?;
    }
    Ok(total)
}

// Signed log of Γ(nums)/Γ(dens); None when a denominator pole makes the coefficient vanish.
fn coefficient(num: &[f64], den: &[f64]) -> Result<Option<SignedLog>> {
    if den.iter().any(|&x| is_nonpositive_integer(x)) {
        return Ok(None);
    }
    log_gamma_ratio(num, den).map(Some)
}

/// Evaluate ₂F₁(A,B;C;x) through the connection formula in y = 1 - x, without the x^{1-C} factor:
/// returns the bracket value and its relative error estimate.
fn connection_terms(a: f64, b: f64, c: f64, y: f64, ln_k: f64, budget: &PrecisionBudget) -> Result<(f64, f64)> {
    let tight = *budget;
    let mut t1 = 0.0;
    let mut rel1 = 0.0;
    if let Some(c1) = coefficient(&[c, c - a - b], &[c - a, c - b])? {
        let (s, _) = series_scaled(&[a - c + 1.0, b - c + 1.0], &[a + b - c + 1.0], y, &tight)?;
        t1 = c1.sign * s.sum.to_f64() * (ln_k + c1.ln_abs + s.ln_scale).exp();
        rel1 = s.rel_error();
    }
    let mut t2 = 0.0;
    let mut rel2 = 0.0;
    if y > 0.0 {
        if let Some(c2) = coefficient(&[c, a + b - c], &[a, b])? {
            let (s, _) = series_scaled(&[1.0 - a, 1.0 - b], &[c - a - b + 1.0], y, &tight)?;
            t2 = c2.sign * s.sum.to_f64() * (ln_k + c2.ln_abs + s.ln_scale + (c - a - b) * y.ln()).exp();
            rel2 = s.rel_error();
        }
    }
    let sum = t1 + t2;
    let err = (t1.abs() * rel1 + t2.abs() * rel2 + 1e-16 * (t1.abs() + t2.abs())) / sum.abs().max(1e-300);
    Ok((sum, err))
}

fn hyp2f1_direct(a: f64, b: f64, c: f64, x: f64, ln_k: f64, budget: &PrecisionBudget) -> Result<(f64, f64)> {
    let (s, _) = series_scaled(&[a, b], &[c], x, budget)?;
    Ok((s.sum.to_f64() * (ln_k + s.ln_scale).exp(), s.rel_error()))
}

fn hyp2f1_connection(a: f64, b: f64, c: f64, y: f64, ln_k: f64, budget: &PrecisionBudget) -> Result<(f64, f64)> {
    let (bracket, rel) = connection_terms(a, b, c, y, ln_k + (1.0 - c) * (-y).ln_1p(), budget)?;
    Ok((bracket, rel))
}

fn hyp2f1_unperturbed(a: f64, b: f64, c: f64, x: f64, y: f64, ln_k: f64, budget: &PrecisionBudget) -> Result<f64> {
    let prefer_direct = x <= 0.5;
    let first = if prefer_direct {
        hyp2f1_direct(a, b, c, x, ln_k, budget)
    } else {
        hyp2f1_connection(a, b, c, y, ln_k, budget)
    };
    match first {
        Ok((v, rel)) if rel < 1e-13 => Ok(v),
        first => {
            let second = if prefer_direct {
                hyp2f1_connection(a, b, c, y, ln_k, budget)
            } else if x < 1.0 {
                hyp2f1_direct(a, b, c, x, ln_k, budget)
            } else {
                return first.map(|p| p.0);
            };
            match (first, second) {
                (Ok(f), Ok(s)) => Ok(if s.1 < f.1 { s.0 } else { f.0 }),
                (Ok(f), Err(_)) => Ok(f.0),
                (Err(_), Ok(s)) => Ok(s.0),
                (Err(e), Err(_)) => Err(e),
            }
        }
    }
}

/// ₂F₁(A,B;C;x) on [0,1] for C-A-B > 0: direct series for x ≤ 1/2, connection formula in 1-x above.
pub fn hyp2f1_kernel_form(a: f64, b: f64, c: f64, x: f64, budget: PrecisionBudget) -> Result<f64> {
    hyp2f1_scaled(a, b, c, x, 1.0 - x, |_| 0.0, budget)
}

/// exp(ln_k(C))·₂F₁(A,B;C;x), with the multiplier folded into each exponent so that
/// large parameters do not overflow intermediate coefficients. `y` is 1 - x, passed separately
/// so that it keeps full relative precision near x = 1.
pub fn hyp2f1_scaled(
    a: f64,
    b: f64,
    c: f64,
    x: f64,
    y: f64,
    ln_k: impl Fn(f64) -> f64,
    budget: PrecisionBudget,
) -> Result<f64> {
    budget.check()?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Precondition(format!("x = {x} outside [0, 1]")));
    }
    if !(c - a - b > 0.0) {
        return Err(Error::Precondition(format!("C - A - B = {} must be positive", c - a - b)));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Pole(c));
    }
    if x == 0.0 {
        return Ok(ln_k(c).exp());
    }
    if x == 1.0 {
        return coefficient(&[c, c - a - b], &[c - a, c - b])
            .map(|c1| c1.map_or(0.0, |v| v.sign * (v.ln_abs + ln_k(c)).exp()));
    }
    if x > 0.5 && near_integer(c - a - b, LOG_CASE_TOL) {
        let delta = (c - a - b) - (c - a - b).round();
        let base = c - delta;
        return across_integer(delta, |s| hyp2f1_unperturbed(a, b, base + s, x, y, ln_k(base + s), &budget));
    }
    hyp2f1_unperturbed(a, b, c, x, y, ln_k(c), &budget)
}

/// Direct series of ₂F₁ (no path selection), exposed for cross-checks.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    hyp2f1_direct(a, b, c, x, 0.0, &PrecisionBudget::tight()).map(|p| p.0)
}

/// Connection-formula evaluation of ₂F₁ in the complementary variable, exposed for cross-checks.
pub fn hyp2f1_connection_path(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    hyp2f1_connection(a, b, c, 1.0 - x, 0.0, &PrecisionBudget::tight()).map(|p| p.0)
}

const MIXTURE_THRESHOLD: f64 = 400.0;

/// ₁F₂(α;β,γ;-X) for X ≥ 0; direct series up to X = 400, beta mixture of ₀F₁ beyond.
pub fn hyp1f2_neg(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("hyp1f2_neg requires X >= 0, got {x}")));
    }
    if x <= MIXTURE_THRESHOLD {
        return hyp1f2_series(alpha, beta, gamma, x);
    }
    hyp1f2_mixture(alpha, beta, gamma, x)
}

/// Direct double-double series of ₁F₂(α;β,γ;-X).
pub fn hyp1f2_series(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<f64> {
    let p = HypParams::new(vec![alpha], vec![beta, gamma])?;
    hyp_pfq(&p, -x, PrecisionBudget::tight()).map(|s| s.value)
}

/// Beta mixture of ₀F₁(;γ;-tX) over t ~ Beta(α, β-α), integrated in s = √t on oscillation-sized panels.
pub fn hyp1f2_mixture(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<f64> {
    let (beta, gamma) = if beta > alpha { (beta, gamma) } else { (gamma, beta) };
    if !(beta > alpha && alpha > 0.0 && gamma > 0.0) {
        return Err(Error::Precondition(format!(
            "beta mixture needs max(β,γ) > α > 0 and γ > 0, got ({alpha}, {beta}, {gamma})"
        )));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let z = x.sqrt();
    let npan = ((z / (2.0 * std::f64::consts::PI)).ceil() as usize + 2).max(4);
    let w = 1.0 / npan as f64;
    let order = 24;
    let p = 2.0 * alpha - 1.0;
    let q = beta - alpha - 1.0;
    let kernel = |s: f64| hyp0f1_neg(gamma, s * s * x);
    let mut total = 0.0;
    // first panel: weight s^p handled exactly
    let first = gauss_jacobi(order, p, 0.0);
    let mut acc = 0.0;
    for (&u, &wt) in first.nodes.iter().zip(&first.weights) {
        let s = w * u;
        acc += wt * (1.0 - s * s).powf(q) * kernel(s)?;
    }
    total += acc * w.powf(p + 1.0);
    let gl = gauss_legendre(order);
    for k in 1..npan - 1 {
        let lo = k as f64 * w;
        let mut acc = 0.0;
        for (&u, &wt) in gl.nodes.iter().zip(&gl.weights) {
            let s = lo + w * u;
            acc += wt * s.powf(p) * (1.0 - s * s).powf(q) * kernel(s)?;
        }
        total += acc * w;
    }
    // last panel: weight (1-s)^q handled exactly
    let last = gauss_jacobi(order, 0.0, q);
    let mut acc = 0.0;
    for (&u, &wt) in last.nodes.iter().zip(&last.weights) {
        let s = 1.0 - w + w * u;
        acc += wt * s.powf(p) * (1.0 + s).powf(q) * kernel(s)?;
    }
    total += acc * w.powf(q + 1.0);
    let ln_norm = ln_gamma_pos(beta) - ln_gamma_pos(alpha) - ln_gamma_pos(beta - alpha);
    Ok(2.0 * total * ln_norm.exp())
}
