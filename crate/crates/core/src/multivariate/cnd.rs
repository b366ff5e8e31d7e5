use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{check_symmetric, eigenvalues};

pub const CND_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CndCertificate {
    pub cnd: bool,
    pub min_eig: f64,
    /// Largest eigenvalue of the centered matrix; positive values are offending.
    pub max_eig: f64,
    pub norm: f64,
}

/// Conditional negative semidefiniteness: ωᵀmω ≤ 0 for every ω summing to zero.
pub fn is_cnd(m: &DMatrix<f64>, tol: f64) -> Result<CndCertificate> {
    check_symmetric(m, 1e-10)?;
    let p = m.nrows();
    let ev = eigenvalues(m);
    let norm = ev.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if p <= 1 {
        return Ok(CndCertificate {
            cnd: true,
            min_eig: 0.0,
            max_eig: 0.0,
            norm,
        });
    }
    let proj = DMatrix::<f64>::identity(p, p) - DMatrix::from_element(p, p, 1.0 / p as f64);
    let centered = &proj * m * &proj;
    let cev = eigenvalues(&centered);
    let max_eig = cev[p - 1];
    Ok(CndCertificate {
        cnd: max_eig <= tol * norm,
        min_eig: cev[0],
        max_eig,
        norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_and_identity() {
        for p in 1..6 {
            assert!(is_cnd(&DMatrix::from_element(p, p, 1.0), CND_TOL).unwrap().cnd);
        }
        let c = is_cnd(&DMatrix::identity(2, 2), CND_TOL).unwrap();
        assert!(!c.cnd && (c.max_eig - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variogram_construction() {
        let eta = [0.3, 1.1, 0.7, 2.0];
        let s: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.5], [-0.4, 2.0], [3.0, -1.0]];
        let m = DMatrix::from_fn(4, 4, |i, j| {
            let dist = ((s[i][0] - s[j][0]).powi(2) + (s[i][1] - s[j][1]).powi(2)).sqrt();
            0.5 * (eta[i] + eta[j]) + dist
        });
        assert!(is_cnd(&m, CND_TOL).unwrap().cnd);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.5, 1.0]);
        assert!(is_cnd(&m, CND_TOL).is_err());
    }
}
