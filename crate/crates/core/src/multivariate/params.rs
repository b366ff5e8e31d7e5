use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::check_symmetric;
use crate::univariate::{cov_eval, KernelParams};

/// Matrix parameters of a p-variate kernel `[ρ_ij G_d(h; a_ij, α_ij, β_ij, γ_ij)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivarParams {
    pub p: usize,
    pub d: usize,
    pub a: DMatrix<f64>,
    pub alpha: DMatrix<f64>,
    pub beta: DMatrix<f64>,
    pub gamma: DMatrix<f64>,
    pub rho: DMatrix<f64>,
}

/// Row-major form used for JSON input and output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultivarDoc {
    #[serde(default)]
    pub p: Option<usize>,
    pub d: usize,
    pub a: Vec<Vec<f64>>,
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<Vec<f64>>,
    pub gamma: Vec<Vec<f64>>,
    pub rho: Vec<Vec<f64>>,
}

fn from_rows(name: &str, rows: &[Vec<f64>], p: usize) -> Result<DMatrix<f64>> {
    if rows.len() != p || rows.iter().any(|r| r.len() != p) {
        return Err(Error::Dimension(format!("{name} must be {p}x{p}")));
    }
    Ok(DMatrix::from_fn(p, p, |i, j| rows[i][j]))
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl MultivarParams {
    pub fn new(
        d: usize,
        a: DMatrix<f64>,
        alpha: DMatrix<f64>,
        beta: DMatrix<f64>,
        gamma: DMatrix<f64>,
        rho: DMatrix<f64>,
    ) -> Result<Self> {
        let mp = MultivarParams {
            p: a.nrows(),
            d,
            a,
            alpha,
            beta,
            gamma,
            rho,
        };
        mp.check()?;
        Ok(mp)
    }

    /// Every matrix constant except ρ.
    pub fn constant(d: usize, a: f64, alpha: f64, beta: f64, gamma: f64, rho: DMatrix<f64>) -> Result<Self> {
        let p = rho.nrows();
        let c = |v: f64| DMatrix::from_element(p, p, v);
        Self::new(d, c(a), c(alpha), c(beta), c(gamma), rho)
    }

    pub fn check(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if self.p == 0 {
            return Err(Error::Dimension("at least one variable is required".into()));
        }
        for m in self.matrices() {
            if m.nrows() != self.p || m.ncols() != self.p {
                return Err(Error::Dimension(format!(
                    "expected {p}x{p} matrices, got {}x{}",
                    m.nrows(),
                    m.ncols(),
                    p = self.p
                )));
            }
            if m.iter().any(|v| !v.is_finite()) {
                return Err(Error::Domain("matrix entries must be finite".into()));
            }
            check_symmetric(m, 1e-12)?;
        }
        if self.a.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Domain("ranges must be positive".into()));
        }
        if (0..self.p).any(|i| !(self.rho[(i, i)] > 0.0)) {
            return Err(Error::Domain("diagonal of rho must be positive".into()));
        }
        Ok(())
    }

    fn matrices(&self) -> [&DMatrix<f64>; 5] {
        [&self.a, &self.alpha, &self.beta, &self.gamma, &self.rho]
    }

    /// Parameters of entry (i, j), with unit variance.
    pub fn entry(&self, i: usize, j: usize) -> Result<KernelParams> {
        if i >= self.p || j >= self.p {
            return Err(Error::Dimension(format!("index ({i}, {j}) out of range for p = {}", self.p)));
        }
        KernelParams::new(self.a[(i, j)], self.alpha[(i, j)], self.beta[(i, j)], self.gamma[(i, j)])
    }

    pub fn max_range(&self) -> f64 {
        self.a.iter().fold(0.0, |acc: f64, &v| acc.max(v))
    }

    pub fn from_doc(doc: &MultivarDoc) -> Result<Self> {
        let p = doc.p.unwrap_or(doc.rho.len());
        Self::new(
            doc.d,
            from_rows("a", &doc.a, p)?,
            from_rows("alpha", &doc.alpha, p)?,
            from_rows("beta", &doc.beta, p)?,
            from_rows("gamma", &doc.gamma, p)?,
            from_rows("rho", &doc.rho, p)?,
        )
    }

    pub fn to_doc(&self) -> MultivarDoc {
        MultivarDoc {
            p: Some(self.p),
            d: self.d,
            a: to_rows(&self.a),
            alpha: to_rows(&self.alpha),
            beta: to_rows(&self.beta),
            gamma: to_rows(&self.gamma),
            rho: to_rows(&self.rho),
        }
    }
}

/// Entry (i, j) of the matrix-valued covariance at distance r.
pub fn cross_eval(mp: &MultivarParams, i: usize, j: usize, r: f64) -> Result<f64> {
    let e = mp.entry(i, j)?;
    Ok(mp.rho[(i, j)] * cov_eval(&e, mp.d, r)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> MultivarParams {
        let rho = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        MultivarParams::constant(1, 1.0, 2.0, 3.0, 4.0, rho).unwrap()
    }

    #[test]
    fn cross_values() {
        let mp = example();
        assert_eq!(cross_eval(&mp, 0, 0, 0.0).unwrap(), 1.0);
        assert_eq!(cross_eval(&mp, 0, 1, 1.0).unwrap(), 0.0);
        let e = mp.entry(0, 1).unwrap();
        let v = cross_eval(&mp, 0, 1, 0.4).unwrap();
        assert!((v - 0.5 * cov_eval(&e, 1, 0.4).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn doc_roundtrip_and_checks() {
        let mp = example();
        assert_eq!(MultivarParams::from_doc(&mp.to_doc()).unwrap(), mp);
        let mut doc = mp.to_doc();
        doc.beta[0][1] = 3.1;
        assert!(matches!(MultivarParams::from_doc(&doc), Err(Error::Asymmetry { .. })));
        let mut doc = mp.to_doc();
        doc.a[1][1] = 0.0;
        assert!(MultivarParams::from_doc(&doc).is_err());
    }

    #[test]
    fn entry_outside_region_is_rejected() {
        let mut mp = example();
        mp.gamma[(0, 1)] = 2.1;
        mp.gamma[(1, 0)] = 2.1;
        assert!(matches!(cross_eval(&mp, 0, 1, 0.2), Err(Error::ParamSpace(_))));
    }
}
