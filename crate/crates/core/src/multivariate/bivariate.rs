use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::params::MultivarParams;
use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma_pos;
use crate::univariate::{spectral_eval, KernelParams};

const GRID_NODES: usize = 4096;
const GRID_MAX: f64 = 100.0;
const TAIL_CENTERS: [f64; 3] = [150.0, 200.0, 300.0];
const WINDOW: usize = 16;
const ZERO_CUTOFF: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BivariateVariant {
    I,
    II,
    III,
}

impl std::str::FromStr for BivariateVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(BivariateVariant::I),
            "II" | "2" => Ok(BivariateVariant::II),
            "III" | "3" => Ok(BivariateVariant::III),
            _ => Err(Error::Domain(format!("unknown bivariate variant {s}"))),
        }
    }
}

/// Bivariate kernel with squared-Bessel cross covariance.
///
/// Variant I: `common_shape` is α, `shape1`/`shape2` are β₁/β₂.
/// Variants II and III: `shape1`/`shape2` are α₁/α₂, `common_shape` is β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariateSpec {
    pub variant: BivariateVariant,
    pub d: usize,
    pub a: f64,
    pub shape1: f64,
    pub shape2: f64,
    pub common_shape: f64,
    pub rho: f64,
    pub rho_max: f64,
    /// Square root of the printed bound on ρ².
    pub rho_max_closed_form: f64,
    /// Infimum of √(G̃₁₁G̃₂₂)/|G̃₁₂| over the frequency grid.
    pub rho_max_numeric: f64,
}

impl BivariateSpec {
    /// Entry parameters (α, β, γ) of the (i, j) covariance.
    pub fn shapes(&self, i: usize, j: usize) -> (f64, f64, f64) {
        let (s1, s2, c) = (self.shape1, self.shape2, self.common_shape);
        match (self.variant, i.min(j), i.max(j)) {
            (BivariateVariant::I, 0, 0) => (c, s1, 3.0 * c + 0.5 - s1),
            (BivariateVariant::I, 1, 1) => (c, s2, 3.0 * c + 0.5 - s2),
            (BivariateVariant::I, _, _) => (c, c + 0.5, 2.0 * c),
            (BivariateVariant::II, 0, 0) => (s1, c, s1 + c - 0.5),
            (BivariateVariant::II, 1, 1) => (s2, c, s2 + c - 0.5),
            (BivariateVariant::III, 0, 0) => (s1, c, 2.0 * s1),
            (BivariateVariant::III, 1, 1) => (s2, c, 2.0 * s2),
            (_, _, _) => (c - 0.5, c, 2.0 * c - 1.0),
        }
    }

    pub fn params(&self) -> Result<MultivarParams> {
        let m = |f: &dyn Fn((f64, f64, f64)) -> f64| {
            DMatrix::from_fn(2, 2, |i, j| f(self.shapes(i, j)))
        };
        MultivarParams::new(
            self.d,
            DMatrix::from_element(2, 2, self.a),
            m(&|s| s.0),
            m(&|s| s.1),
            m(&|s| s.2),
            DMatrix::from_row_slice(2, 2, &[1.0, self.rho, self.rho, 1.0]),
        )
    }

    fn spectral(&self, i: usize, j: usize, x: f64) -> Result<f64> {
        let (al, be, ga) = self.shapes(i, j);
        let p = KernelParams::new(self.a, al, be, ga)?;
        spectral_eval(&p, self.d, x / (std::f64::consts::PI * self.a))
    }

    /// √(G̃₁₁G̃₂₂)/|G̃₁₂| at x = π a u (infinite where the cross density vanishes).
    pub fn spectral_ratio(&self, x: f64) -> Result<f64> {
        let (num, g12) = self.ratio_parts(x)?;
        Ok(if g12 == 0.0 { f64::INFINITY } else { num / g12.abs() })
    }

    fn ratio_parts(&self, x: f64) -> Result<(f64, f64)> {
        let g11 = self.spectral(0, 0, x)?;
        let g22 = self.spectral(1, 1, x)?;
        let g12 = self.spectral(0, 1, x)?;
        Ok(((g11.max(0.0) * g22.max(0.0)).sqrt(), g12))
    }

    /// (x, ratio) over the frequency grid, leaving out nodes so close to a zero of the cross
    /// density that the ratio is rounding noise.
    fn ratio_profile(&self) -> Result<Vec<(f64, f64)>> {
        let step = GRID_MAX / (GRID_NODES - 1) as f64;
        let mut runs: Vec<Vec<f64>> = vec![(0..GRID_NODES).map(|k| k as f64 * step).collect()];
        for c in TAIL_CENTERS {
            runs.push((0..=2 * WINDOW).map(|k| c + (k as f64 - WINDOW as f64) * step).collect());
        }
        let mut out = Vec::new();
        for xs in runs {
            let parts = xs.iter().map(|&x| self.ratio_parts(x)).collect::<Result<Vec<_>>>()?;
            for (k, &(num, g12)) in parts.iter().enumerate() {
                let lo = k.saturating_sub(WINDOW);
                let hi = (k + WINDOW + 1).min(parts.len());
                let env = parts[lo..hi].iter().fold(0.0f64, |acc, p| acc.max(p.1.abs()));
                if g12.abs() >= ZERO_CUTOFF * env && g12 != 0.0 {
                    out.push((xs[k], num / g12.abs()));
                }
            }
        }
        Ok(out)
    }
}

fn check_shapes(variant: BivariateVariant, d: usize, s1: f64, s2: f64, c: f64) -> Result<()> {
    let h = d as f64 / 2.0;
    let ok = match variant {
        BivariateVariant::I => {
            c > h && s1 > c + 0.5 && s1 <= 2.0 * c && s2 > c + 0.5 && s2 <= 2.0 * c
        }
        _ => s1 > h && s2 > h && c >= s1.max(s2) + 0.5,
    };
    if ok {
        Ok(())
    } else {
        let need = match variant {
            BivariateVariant::I => "alpha > d/2 and alpha + 1/2 < beta_k <= 2 alpha",
            _ => "alpha_k > d/2 and beta >= max(alpha_1, alpha_2) + 1/2",
        };
        Err(Error::ParamSpace(format!(
            "variant {variant:?} shapes ({s1}, {s2}, {c}) in dimension {d} violate {need}"
        )))
    }
}

/// ρ² bound exactly as printed for each variant.
fn printed_bound(variant: BivariateVariant, d: usize, s1: f64, s2: f64, c: f64) -> f64 {
    let h = d as f64 / 2.0;
    let lg = ln_gamma_pos;
    let ln = match variant {
        BivariateVariant::I => {
            let t1 = 3.0 * c - s1 + 0.5 - h;
            let t2 = 3.0 * c - s2 + 0.5 - h;
            2.0 * lg(c + 0.5) + 2.0 * lg(2.0 * c) + lg(s1 - h) + lg(s2 - h) + lg(t1) + lg(t2)
                - 2.0 * lg(c + 0.5 - h)
                - 2.0 * lg(2.0 * c - h)
                - lg(s1)
                - lg(s2)
                - lg(t1)
                - lg(t2)
        }
        BivariateVariant::II => {
            lg(s1) + lg(s2) + lg(s1 + c - 0.5 - h) + lg(s2 + c - 0.5 - h) + 2.0 * lg(c - 0.5 - h)
                + 2.0 * lg(2.0 * c - 1.0)
                - lg(s1 - h)
                - lg(s2 - h)
                - lg(s1 + c - 0.5)
                - lg(s2 + c - 0.5)
                - 2.0 * lg(c - 0.5)
                - 2.0 * lg(2.0 * c - 1.0 - h)
        }
        BivariateVariant::III => {
            lg(s1) + lg(s2) + lg(2.0 * s1 - h) + lg(2.0 * s2 - h) + 2.0 * lg(c - 0.5 - h)
                + 2.0 * lg(2.0 * c - 1.0)
                - lg(s1 - h)
                - lg(s2 - h)
                - lg(2.0 * s1)
                - lg(2.0 * s2)
                - 2.0 * lg(c - 0.5)
                - 2.0 * lg(2.0 * c - 1.0 - h)
        }
    };
    ln.exp()
}

/// Builds one of the three bivariate kernels; `rho` defaults to the certified bound.
pub fn make_bivariate(
    variant: BivariateVariant,
    d: usize,
    a: f64,
    shape1: f64,
    shape2: f64,
    common_shape: f64,
    rho: Option<f64>,
) -> Result<(BivariateSpec, MultivarParams)> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("range a must be positive and finite, got {a}")));
    }
    check_shapes(variant, d, shape1, shape2, common_shape)?;
    let mut spec = BivariateSpec {
        variant,
        d,
        a,
        shape1,
        shape2,
        common_shape,
        rho: 0.0,
        rho_max: 0.0,
        rho_max_closed_form: printed_bound(variant, d, shape1, shape2, common_shape).sqrt(),
        rho_max_numeric: f64::INFINITY,
    };
    for (_, r) in spec.ratio_profile()? {
        spec.rho_max_numeric = spec.rho_max_numeric.min(r);
    }
    spec.rho_max = spec.rho_max_closed_form.min(spec.rho_max_numeric);
    let rho = rho.unwrap_or(spec.rho_max);
    if !(rho.abs() <= spec.rho_max * (1.0 + 1e-12)) {
        return Err(Error::ParamSpace(format!(
            "|rho| = {} exceeds the certified bound {}",
            rho.abs(),
            spec.rho_max
        )));
    }
    spec.rho = rho;
    let mp = spec.params()?;
    Ok((spec, mp))
}

/// Frequency u at which G̃₁₁G̃₂₂ < ρ²G̃₁₂², if any grid node shows it.
pub fn determinantal_witness(spec: &BivariateSpec, rho: f64) -> Result<Option<f64>> {
    let hit = spec.ratio_profile()?.into_iter().find(|&(_, r)| r < rho.abs());
    Ok(hit.map(|(x, _)| x / (std::f64::consts::PI * spec.a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::cov_eval;

    #[test]
    fn variant_one_degenerate_case() {
        let (spec, mp) = make_bivariate(BivariateVariant::I, 1, 1.0, 3.0, 3.0, 1.5, None).unwrap();
        assert!((spec.rho_max - 1.0).abs() < 1e-9, "{spec:?}");
        for r in [0.1, 0.4, 0.8] {
            let d = cov_eval(&mp.entry(0, 0).unwrap(), 1, r).unwrap();
            let c = cov_eval(&mp.entry(0, 1).unwrap(), 1, r).unwrap();
            assert!((d - c).abs() < 1e-9);
        }
    }

    #[test]
    fn variant_two_degenerate_case() {
        let (spec, _) = make_bivariate(BivariateVariant::II, 1, 1.0, 1.5, 1.5, 2.0, None).unwrap();
        assert!((spec.rho_max - 1.0).abs() < 1e-9);
        assert!((spec.rho_max_closed_form - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_zeta_ratio() {
        for (v, s1, s2, c) in [
            (BivariateVariant::II, 0.8, 1.3, 2.2),
            (BivariateVariant::III, 0.9, 1.4, 2.5),
        ] {
            let (spec, _) = make_bivariate(v, 1, 1.0, s1, s2, c, Some(0.0)).unwrap();
            assert!((spec.rho_max_closed_form - spec.rho_max_numeric).abs() < 1e-9 * spec.rho_max, "{spec:?}");
            assert!(spec.rho_max < 1.0);
        }
    }

    #[test]
    fn bounds_and_witness() {
        assert!(make_bivariate(BivariateVariant::I, 1, 1.0, 2.0, 3.0, 1.5, None).is_err());
        assert!(make_bivariate(BivariateVariant::II, 1, 1.0, 1.5, 1.0, 1.8, None).is_err());
        let (spec, _) = make_bivariate(BivariateVariant::I, 2, 1.0, 2.2, 2.8, 1.5, None).unwrap();
        assert!(make_bivariate(BivariateVariant::I, 2, 1.0, 2.2, 2.8, 1.5, Some(1.01 * spec.rho_max)).is_err());
        assert!(determinantal_witness(&spec, spec.rho_max).unwrap().is_none());
        assert!(determinantal_witness(&spec, 1.05 * spec.rho_max_numeric).unwrap().is_some());
    }
}
