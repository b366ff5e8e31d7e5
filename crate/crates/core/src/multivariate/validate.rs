use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::cnd::{is_cnd, CND_TOL};
use super::params::MultivarParams;
use super::psi::{psi_check, psi_eval, PsiFamily, PsiSpec};
use crate::error::{Error, Result};
use crate::linalg::psd_from_logs;
use crate::specfun::gamma::ln_gamma_pos;
use crate::univariate::check_param_space;

pub const PSD_TOL: f64 = 1e-10;
const STRUCT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionSet {
    C1,
    C2,
    C3,
    C4,
    C5,
    #[serde(rename = "C4_swapped")]
    C4Swapped,
    #[serde(rename = "C5_swapped")]
    C5Swapped,
}

impl ConditionSet {
    pub const ALL: [ConditionSet; 7] = [
        ConditionSet::C1,
        ConditionSet::C2,
        ConditionSet::C3,
        ConditionSet::C4,
        ConditionSet::C5,
        ConditionSet::C4Swapped,
        ConditionSet::C5Swapped,
    ];

    pub fn needs_psi1(self) -> bool {
        matches!(self, ConditionSet::C3 | ConditionSet::C5 | ConditionSet::C5Swapped)
    }

    pub fn needs_psi2(self) -> bool {
        matches!(
            self,
            ConditionSet::C4 | ConditionSet::C5 | ConditionSet::C4Swapped | ConditionSet::C5Swapped
        )
    }
}

impl std::str::FromStr for ConditionSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "C1" => ConditionSet::C1,
            "C2" => ConditionSet::C2,
            "C3" => ConditionSet::C3,
            "C4" => ConditionSet::C4,
            "C5" => ConditionSet::C5,
            "C4_SWAPPED" => ConditionSet::C4Swapped,
            "C5_SWAPPED" => ConditionSet::C5Swapped,
            _ => return Err(Error::Domain(format!("unknown condition set {s}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub label: String,
    pub min_eig: f64,
    pub max_eig: f64,
    pub passed: bool,
}

/// Scalar mixture baselines found by the search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub condition_set: ConditionSet,
    pub satisfied: bool,
    pub failures: Vec<(String, String)>,
    pub certificates: Vec<Certificate>,
    pub witness: Option<Baseline>,
    /// Some ψ admissibility rests on a finite-difference sweep only.
    pub numeric_only: bool,
}

struct Checker<'a> {
    mp: &'a MultivarParams,
    failures: Vec<(String, String)>,
    certificates: Vec<Certificate>,
    numeric_only: bool,
}

impl Checker<'_> {
    fn fail(&mut self, label: &str, msg: impl Into<String>) {
        self.failures.push((label.to_string(), msg.into()));
    }

    fn constant(&mut self, label: &str, m: &DMatrix<f64>) -> f64 {
        let v0 = m[(0, 0)];
        if let Some(v) = m.iter().find(|v| (*v - v0).abs() > 1e-12 * v0.abs().max(1.0)) {
            self.fail(label, format!("matrix is not constant ({v0} vs {v})"));
        }
        v0
    }

    fn cnd(&mut self, label: &str, m: &DMatrix<f64>) -> Result<()> {
        let c = is_cnd(m, CND_TOL)?;
        self.certificates.push(Certificate {
            label: label.into(),
            min_eig: c.min_eig,
            max_eig: c.max_eig,
            passed: c.cnd,
        });
        if !c.cnd {
            self.fail(
                label,
                format!("not conditionally negative semidefinite: centered eigenvalue {:e}", c.max_eig),
            );
        }
        Ok(())
    }

    fn entries(&self) -> impl Iterator<Item = (usize, usize)> {
        let p = self.mp.p;
        (0..p).flat_map(move |i| (0..p).map(move |j| (i, j)))
    }

    /// The closed-form kernel of every entry has to exist.
    fn defined(&mut self) {
        let h = self.mp.d as f64 / 2.0;
        for (i, j) in self.entries().filter(|&(i, j)| i <= j).collect::<Vec<_>>() {
            let (al, be, ga) = (self.mp.alpha[(i, j)], self.mp.beta[(i, j)], self.mp.gamma[(i, j)]);
            if !(al > h && be > h && ga > h && be > al && ga > al) {
                self.fail(
                    "entries_defined",
                    format!("entry ({i},{j}) = ({al}, {be}, {ga}) has no closed-form kernel in dimension {}", self.mp.d),
                );
            }
        }
    }

    fn entry_region(&mut self, alpha: f64) {
        for (i, j) in self.entries().filter(|&(i, j)| i <= j).collect::<Vec<_>>() {
            let (be, ga) = (self.mp.beta[(i, j)], self.mp.gamma[(i, j)]);
            let rep = check_param_space(alpha, be, ga, self.mp.d);
            if !rep.in_space {
                self.fail(
                    "entry_region",
                    format!("entry ({i},{j}) = ({alpha}, {be}, {ga}): {}", rep.failures().join("; ")),
                );
            }
        }
    }

    fn psd_certificate(&mut self, label: &str, logs: &DMatrix<f64>) -> bool {
        let sign = self.mp.rho.map(f64::signum);
        let (ok, e) = psd_from_logs(&sign, logs, PSD_TOL);
        self.certificates.push(Certificate {
            label: label.into(),
            min_eig: e.min_eig,
            max_eig: e.max_eig,
            passed: ok,
        });
        if !ok {
            self.fail(label, format!("ratio matrix has negative eigenvalue {:e}", e.min_eig));
        }
        ok
    }

    fn psi(&mut self, label: &str, spec: &PsiSpec) -> Result<()> {
        let rep = psi_check(spec)?;
        if spec.family == PsiFamily::Custom {
            self.numeric_only = true;
        }
        if !rep.passed {
            self.fail(label, format!("psi admissibility fails: {}", rep.messages.join("; ")));
        }
        if spec.anchor_points.len() != self.mp.p {
            self.fail(
                label,
                format!("{} anchor points given for {} variables", spec.anchor_points.len(), self.mp.p),
            );
            return Ok(());
        }
        let dim = spec.anchor_dim();
        if spec.anchor_points.iter().any(|s| s.len() > dim) {
            self.fail(label, format!("anchor points must lie in dimension {dim} or lower"));
        }
        Ok(())
    }

    /// Compares each entry of `target` with ψ(‖s_i - s_j‖).
    fn psi_matches(&mut self, label: &str, spec: &PsiSpec, target: impl Fn(usize, usize) -> f64) -> Result<()> {
        if spec.anchor_points.len() != self.mp.p {
            return Ok(());
        }
        for (i, j) in self.entries().filter(|&(i, j)| i <= j).collect::<Vec<_>>() {
            let (si, sj) = (&spec.anchor_points[i], &spec.anchor_points[j]);
            let n = si.len().max(sj.len());
            let at = |s: &Vec<f64>, k: usize| s.get(k).copied().unwrap_or(0.0);
            let dist = (0..n).map(|k| (at(si, k) - at(sj, k)).powi(2)).sum::<f64>().sqrt();
            let want = psi_eval(spec, dist)?;
            let got = target(i, j);
            if (got - want).abs() > STRUCT_TOL * want.abs().max(1.0) {
                self.fail(label, format!("entry ({i},{j}) is {got}, psi gives {want}"));
            }
        }
        Ok(())
    }
}

fn ln_ratio(mp: &MultivarParams, i: usize, j: usize, a_power: f64) -> f64 {
    let h = mp.d as f64 / 2.0;
    mp.rho[(i, j)].abs().ln()
        + a_power * mp.a[(i, j)].ln()
        + ln_gamma_pos(mp.beta[(i, j)] - h)
        + ln_gamma_pos(mp.gamma[(i, j)] - h)
}

/// Ratio matrix logs for sets 1-3 at baseline (β, γ).
fn ratio_logs_shared_alpha(mp: &MultivarParams, a_power: f64, beta: f64, gamma: f64) -> DMatrix<f64> {
    DMatrix::from_fn(mp.p, mp.p, |i, j| {
        ln_ratio(mp, i, j, a_power) - ln_gamma_pos(mp.beta[(i, j)] - beta) - ln_gamma_pos(mp.gamma[(i, j)] - gamma)
    })
}

/// Ratio matrix logs for sets 4-5 at baseline γ.
fn ratio_logs_varying_alpha(mp: &MultivarParams, a_power: f64, gamma: f64) -> DMatrix<f64> {
    let h = mp.d as f64 / 2.0;
    DMatrix::from_fn(mp.p, mp.p, |i, j| {
        let al = mp.alpha[(i, j)];
        ln_ratio(mp, i, j, a_power)
            - al.ln()
            - ln_gamma_pos(al - h)
            - ln_gamma_pos(mp.beta[(i, j)] - al - 1.0)
            - ln_gamma_pos(mp.gamma[(i, j)] - gamma)
    })
}

fn margin(mp: &MultivarParams, logs: &DMatrix<f64>) -> f64 {
    let sign = mp.rho.map(f64::signum);
    let (_, e) = psd_from_logs(&sign, logs, PSD_TOL);
    if e.min_eig.is_finite() {
        e.min_eig
    } else {
        f64::NEG_INFINITY
    }
}

fn candidates(lo: f64, hi: f64) -> Vec<f64> {
    (0..64)
        .map(|k| hi - (hi - lo) * 10f64.powf(-6.0 + 6.0 * k as f64 / 63.0) * (1.0 - 1e-9))
        .collect()
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, x0: f64, f0: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut best_x, mut best_f) = (x0, f0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..40 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best_f {
            best_x = x;
            best_f = v;
        }
    }
    (best_x, best_f)
}

fn bracket(cands: &[f64], k: usize, lo: f64, hi: f64) -> (f64, f64) {
    let a = if k + 1 < cands.len() { cands[k + 1] } else { lo };
    let b = if k > 0 { cands[k - 1] } else { hi };
    (a.min(b), a.max(b))
}

/// Maximizes the PSD margin over (β, γ) in the box (lo, hi) subject to `feasible`.
fn search_2d(
    obj: &dyn Fn(f64, f64) -> f64,
    feasible: &dyn Fn(f64, f64) -> bool,
    (blo, bhi): (f64, f64),
    (glo, ghi): (f64, f64),
) -> Option<(f64, f64, f64)> {
    let f = |b: f64, g: f64| {
        if b > blo && b < bhi && g > glo && g < ghi && feasible(b, g) {
            obj(b, g)
        } else {
            f64::NEG_INFINITY
        }
    };
    let bc = candidates(blo, bhi);
    let gc = candidates(glo, ghi);
    let mut best: Option<(usize, usize, f64)> = None;
    for (ib, &b) in bc.iter().enumerate() {
        for (ig, &g) in gc.iter().enumerate() {
            let v = f(b, g);
            if v > f64::NEG_INFINITY && best.map_or(true, |(_, _, bv)| v > bv) {
                best = Some((ib, ig, v));
            }
        }
    }
    let (ib, ig, mut v) = best?;
    let (mut b, mut g) = (bc[ib], gc[ig]);
    let (b_lo, b_hi) = bracket(&bc, ib, blo, bhi);
    let (g_lo, g_hi) = bracket(&gc, ig, glo, ghi);
    for _ in 0..2 {
        let (nb, nv) = golden_max(&|x| f(x, g), b_lo, b_hi, b, v);
        b = nb;
        v = nv;
        let (ng, nv) = golden_max(&|y| f(b, y), g_lo, g_hi, g, v);
        g = ng;
        v = nv;
    }
    Some((b, g, v))
}

fn search_1d(obj: &dyn Fn(f64) -> f64, feasible: &dyn Fn(f64) -> bool, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let f = |g: f64| {
        if g >= lo && g < hi && feasible(g) {
            obj(g)
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut cands = candidates(lo, hi);
    cands.push(lo);
    let mut best: Option<(usize, f64)> = None;
    for (k, &g) in cands.iter().enumerate() {
        let v = f(g);
        if v > f64::NEG_INFINITY && best.map_or(true, |(_, bv)| v > bv) {
            best = Some((k, v));
        }
    }
    let (k, v) = best?;
    if k == cands.len() - 1 {
        return Some((lo, v));
    }
    let (a, b) = bracket(&cands[..cands.len() - 1], k, lo, hi);
    Some(golden_max(&f, a, b, cands[k], v))
}

fn in_p0(alpha: f64, beta: f64, gamma: f64) -> bool {
    check_param_space(alpha, beta, gamma, 0).in_space
}

fn min_entry(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(f64::INFINITY, |acc, &v| acc.min(v))
}

/// Checks one of the sufficient condition sets for validity of the matrix-valued kernel.
pub fn validate(
    mp: &MultivarParams,
    set: ConditionSet,
    psi1: Option<&PsiSpec>,
    psi2: Option<&PsiSpec>,
) -> Result<ValidityReport> {
    mp.check()?;
    if set.needs_psi1() && psi1.is_none() {
        return Err(Error::Missing(format!("condition set {set:?} needs psi1")));
    }
    if set.needs_psi2() && psi2.is_none() {
        return Err(Error::Missing(format!("condition set {set:?} needs psi2")));
    }
    let swapped;
    let mp = match set {
        ConditionSet::C4Swapped | ConditionSet::C5Swapped => {
            let mut m = mp.clone();
            std::mem::swap(&mut m.beta, &mut m.gamma);
            swapped = m;
            &swapped
        }
        _ => mp,
    };
    let mut ck = Checker {
        mp,
        failures: Vec::new(),
        certificates: Vec::new(),
        numeric_only: false,
    };
    let witness = match set {
        ConditionSet::C1 | ConditionSet::C2 | ConditionSet::C3 => shared_alpha(&mut ck, set, psi1)?,
        _ => varying_alpha(&mut ck, set, psi1, psi2.expect("checked above"))?,
    };
    Ok(ValidityReport {
        condition_set: set,
        satisfied: ck.failures.is_empty(),
        failures: ck.failures,
        certificates: ck.certificates,
        witness,
        numeric_only: ck.numeric_only,
    })
}

fn shared_alpha(ck: &mut Checker, set: ConditionSet, psi1: Option<&PsiSpec>) -> Result<Option<Baseline>> {
    let mp = ck.mp;
    let p = mp.p;
    let d = mp.d as f64;
    let (a_power, shift) = match set {
        ConditionSet::C1 => {
            ck.constant("range_constant", &mp.a);
            (0.0, 0.0)
        }
        ConditionSet::C2 => {
            range_max_structure(ck);
            (d, 1.0)
        }
        _ => {
            let spec = psi1.expect("checked above");
            ck.psi("psi1", spec)?;
            ck.psi_matches("range_structure", spec, |i, j| mp.a[(i, j)].powi(2))?;
            (d, spec.monotonicity_order_q as f64 + 2.0)
        }
    };
    let alpha = ck.constant("alpha_constant", &mp.alpha);
    ck.cnd("beta_cnd", &mp.beta)?;
    ck.cnd("gamma_cnd", &mp.gamma)?;
    ck.defined();
    ck.entry_region(alpha);
    let (bhi, ghi) = (min_entry(&mp.beta), min_entry(&mp.gamma));
    let h = d / 2.0;
    let defined = (0..p).all(|i| {
        (0..p).all(|j| mp.beta[(i, j)] > h && mp.gamma[(i, j)] > h && mp.alpha[(i, j)] > h)
    });
    if !defined || !(bhi > alpha && ghi > alpha) {
        ck.fail("baseline", "no baseline (beta, gamma) below the entries exists");
        return Ok(None);
    }
    let obj = |b: f64, g: f64| margin(mp, &ratio_logs_shared_alpha(mp, a_power, b, g));
    let feasible = |b: f64, g: f64| in_p0(alpha + shift, b + shift, g + shift);
    match search_2d(&obj, &feasible, (alpha, bhi), (alpha, ghi)) {
        None => {
            ck.fail("baseline", "no baseline (beta, gamma) satisfies the mixture region");
            Ok(None)
        }
        Some((b, g, _)) => {
            ck.psd_certificate("ratio_psd", &ratio_logs_shared_alpha(mp, a_power, b, g));
            Ok(Some(Baseline {
                beta: Some(b),
                gamma: Some(g),
            }))
        }
    }
}

/// a_ij = max(ε_i, ε_j) off the diagonal and a_ii = ε_i - δ_i with 0 ≤ δ_i < ε_i.
fn range_max_structure(ck: &mut Checker) {
    let a = &ck.mp.a;
    let p = ck.mp.p;
    let eps: Vec<f64> = (0..p)
        .map(|i| {
            if p == 1 {
                a[(0, 0)]
            } else {
                (0..p).filter(|&j| j != i).map(|j| a[(i, j)]).fold(f64::INFINITY, f64::min)
            }
        })
        .collect();
    for i in 0..p {
        for j in 0..i {
            let want = eps[i].max(eps[j]);
            if (a[(i, j)] - want).abs() > 1e-12 * want {
                ck.fail(
                    "range_structure",
                    format!("a[{i},{j}] = {} but max(eps_{i}, eps_{j}) = {want}", a[(i, j)]),
                );
            }
        }
        let delta = eps[i] - a[(i, i)];
        if !(delta >= -1e-12 * eps[i] && delta < eps[i]) {
            ck.fail(
                "range_structure",
                format!("a[{i},{i}] = {} needs 0 < a_ii <= eps_{i} = {}", a[(i, i)], eps[i]),
            );
        }
    }
}

fn varying_alpha(
    ck: &mut Checker,
    set: ConditionSet,
    psi1: Option<&PsiSpec>,
    psi2: &PsiSpec,
) -> Result<Option<Baseline>> {
    let mp = ck.mp;
    let d = mp.d as f64;
    let five = matches!(set, ConditionSet::C5 | ConditionSet::C5Swapped);
    let mut q = 0.0;
    if five {
        let spec = psi1.expect("checked above");
        ck.psi("psi1", spec)?;
        ck.psi_matches("range_structure", spec, |i, j| mp.a[(i, j)].powi(2))?;
        q = spec.monotonicity_order_q as f64;
    } else {
        let a = if mp.p == 1 { mp.a[(0, 0)] } else { mp.a[(0, 1)] };
        for i in 0..mp.p {
            for j in 0..mp.p {
                let v = mp.a[(i, j)];
                if i != j && (v - a).abs() > 1e-12 * a {
                    ck.fail("range_structure", format!("off-diagonal range a[{i},{j}] = {v} differs from {a}"));
                }
                if i == j && !(v > 0.0 && v <= a * (1.0 + 1e-12)) {
                    ck.fail("range_structure", format!("a[{i},{i}] = {v} must lie in (0, {a}]"));
                }
            }
        }
    }
    ck.psi("psi2", psi2)?;
    ck.psi_matches("alpha_structure", psi2, |i, j| mp.alpha[(i, j)])?;
    let shifted = mp.beta.map(|v| v) - &mp.alpha - DMatrix::from_element(mp.p, mp.p, 1.0);
    ck.cnd("beta_minus_alpha_cnd", &shifted)?;
    if shifted.iter().any(|&v| !(v > 0.0)) {
        ck.fail("beta_minus_alpha_cnd", "beta - alpha - 1 must have positive entries");
    }
    ck.cnd("gamma_cnd", &mp.gamma)?;
    ck.defined();

    let sup = psi2.supremum().max(mp.alpha.iter().fold(0.0f64, |acc, &v| acc.max(v)));
    let lo = (2.0 * sup + 0.5).max(0.5);
    let hi = min_entry(&mp.gamma);
    let h = d / 2.0;
    let defined = mp.alpha.iter().all(|&v| v > h) && mp.beta.iter().all(|&v| v > h) && mp.gamma.iter().all(|&v| v > h);
    if !sup.is_finite() {
        ck.fail("alpha_structure", "psi2 is unbounded, so no baseline gamma bounds it");
        return Ok(None);
    }
    if !defined || shifted.iter().any(|&v| !(v > 0.0)) || !(lo < hi) {
        ck.fail(
            "baseline",
            format!("no baseline gamma with 2 sup psi2 + 1/2 = {lo} <= gamma < min gamma_ij = {hi}"),
        );
        return Ok(None);
    }
    let a_power = if five { d + 2.0 } else { d };
    let obj = |g: f64| margin(mp, &ratio_logs_varying_alpha(mp, a_power, g));
    let alphas: Vec<f64> = mp.alpha.iter().copied().collect();
    let feasible = |g: f64| !five || alphas.iter().all(|&al| in_p0(al + q + 3.0, al + q + 4.0, g + q + 3.0));
    let found = search_1d(&obj, &feasible, lo, hi);
    let Some((g, _)) = found else {
        ck.fail("baseline", "no baseline gamma satisfies the shifted mixture region");
        return Ok(None);
    };
    ck.psd_certificate("ratio_psd", &ratio_logs_varying_alpha(mp, a_power, g));
    let swapped = matches!(set, ConditionSet::C4Swapped | ConditionSet::C5Swapped);
    Ok(Some(if swapped {
        Baseline {
            beta: Some(g),
            gamma: None,
        }
    } else {
        Baseline {
            beta: None,
            gamma: Some(g),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(r: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[1.0, r, r, 1.0])
    }

    #[test]
    fn constant_c1() {
        let mp = MultivarParams::constant(1, 1.0, 2.0, 3.0, 4.0, rho(0.5)).unwrap();
        let rep = validate(&mp, ConditionSet::C1, None, None).unwrap();
        assert!(rep.satisfied, "{rep:?}");
        let w = rep.witness.unwrap();
        let (b, g) = (w.beta.unwrap(), w.gamma.unwrap());
        assert!(b < 3.0 && g < 4.0 && in_p0(2.0, b, g));
        assert!(in_p0(2.0, 2.9, 3.9) && !in_p0(2.0, 2.5, 3.5));
    }

    #[test]
    fn c1_rejects_large_correlation() {
        let mp = MultivarParams::constant(1, 1.0, 2.0, 3.0, 4.0, rho(1.2)).unwrap();
        let rep = validate(&mp, ConditionSet::C1, None, None).unwrap();
        assert!(!rep.satisfied);
        assert!(rep.failures.iter().any(|(l, _)| l == "ratio_psd"));
    }

    #[test]
    fn c2_range_structure() {
        let a = DMatrix::from_row_slice(2, 2, &[0.8, 1.0, 1.0, 0.9]);
        let c = |v: f64| DMatrix::from_element(2, 2, v);
        let mp = MultivarParams::new(1, a, c(2.0), c(4.0), c(5.0), rho(0.3)).unwrap();
        let rep = validate(&mp, ConditionSet::C2, None, None).unwrap();
        assert!(!rep.failures.iter().any(|(l, _)| l == "range_structure"), "{rep:?}");
        assert!(rep.satisfied, "{rep:?}");

        let a = DMatrix::from_row_slice(2, 2, &[1.2, 1.0, 1.0, 0.9]);
        let mp = MultivarParams::new(1, a, c(2.0), c(4.0), c(5.0), rho(0.3)).unwrap();
        let rep = validate(&mp, ConditionSet::C2, None, None).unwrap();
        assert!(rep.failures.iter().any(|(l, _)| l == "range_structure"));
    }

    #[test]
    fn missing_psi_is_an_error() {
        let mp = MultivarParams::constant(1, 1.0, 2.0, 3.0, 4.0, rho(0.5)).unwrap();
        assert!(matches!(validate(&mp, ConditionSet::C3, None, None), Err(Error::Missing(_))));
        assert!(matches!(validate(&mp, ConditionSet::C4, None, None), Err(Error::Missing(_))));
    }

    #[test]
    fn c3_with_log_bernstein() {
        let psi1 = PsiSpec::new(PsiFamily::LogBernstein, vec![1.0], 0, vec![vec![0.0], vec![1.5]]).unwrap();
        let a12 = (1.0 + 1.5f64.ln_1p()).sqrt();
        let a = DMatrix::from_row_slice(2, 2, &[1.0, a12, a12, 1.0]);
        let c = |v: f64| DMatrix::from_element(2, 2, v);
        let mp = MultivarParams::new(1, a, c(2.0), c(4.0), c(5.0), rho(0.3)).unwrap();
        let rep = validate(&mp, ConditionSet::C3, Some(&psi1), None).unwrap();
        assert!(rep.satisfied, "{rep:?}");
        let bad = PsiSpec::new(PsiFamily::LogBernstein, vec![1.0], 0, vec![vec![0.0], vec![2.5]]).unwrap();
        let rep = validate(&mp, ConditionSet::C3, Some(&bad), None).unwrap();
        assert!(rep.failures.iter().any(|(l, _)| l == "range_structure"));
    }

    fn c4_instance(r: f64) -> (MultivarParams, PsiSpec) {
        let psi2 = PsiSpec::new(PsiFamily::Custom, vec![0.6, 0.2, 1.0], 0, vec![vec![0.0], vec![0.7]]).unwrap();
        let a12 = psi_eval(&psi2, 0.7).unwrap();
        let alpha = DMatrix::from_row_slice(2, 2, &[0.6, a12, a12, 0.6]);
        let beta = alpha.map(|v| v + 2.5);
        let gamma = DMatrix::from_element(2, 2, 4.0);
        let a = DMatrix::from_row_slice(2, 2, &[0.9, 1.0, 1.0, 0.8]);
        (MultivarParams::new(1, a, alpha, beta, gamma, rho(r)).unwrap(), psi2)
    }

    #[test]
    fn c4_instance_validates() {
        let (mp, psi2) = c4_instance(0.4);
        let rep = validate(&mp, ConditionSet::C4, None, Some(&psi2)).unwrap();
        assert!(rep.satisfied && rep.numeric_only, "{rep:?}");
        let g = rep.witness.unwrap().gamma.unwrap();
        assert!(g >= 2.1 && g < 4.0);
        let (mp, psi2) = c4_instance(3.0);
        assert!(!validate(&mp, ConditionSet::C4, None, Some(&psi2)).unwrap().satisfied);
    }

    #[test]
    fn swapped_exchanges_roles() {
        let (mut mp, psi2) = c4_instance(0.4);
        std::mem::swap(&mut mp.beta, &mut mp.gamma);
        let rep = validate(&mp, ConditionSet::C4Swapped, None, Some(&psi2)).unwrap();
        assert!(rep.satisfied, "{rep:?}");
        assert!(rep.witness.unwrap().beta.is_some());
        assert!(!validate(&mp, ConditionSet::C4, None, Some(&psi2)).unwrap().satisfied);
    }
}
