use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalue summary of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigSummary {
    pub min_eig: f64,
    pub max_eig: f64,
}

pub fn check_symmetric(m: &DMatrix<f64>, tol: f64) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    let scale = m.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    for i in 0..m.nrows() {
        for j in 0..i {
            let (u, l) = (m[(j, i)], m[(i, j)]);
            if !((u - l).abs() <= tol * scale) {
                return Err(Error::Asymmetry {
                    row: j,
                    col: i,
                    upper: u,
                    lower: l,
                });
            }
        }
    }
    Ok(())
}

pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn eig_summary(m: &DMatrix<f64>) -> EigSummary {
    if m.nrows() == 0 {
        return EigSummary {
            min_eig: 0.0,
            max_eig: 0.0,
        };
    }
    let ev = eigenvalues(m);
    EigSummary {
        min_eig: ev[0],
        max_eig: ev[ev.len() - 1],
    }
}

/// PSD test of a matrix given entrywise as sign · exp(log_abs), scaled by its diagonal first
/// so that widely different magnitudes do not swamp the eigenvalue check.
pub fn psd_from_logs(sign: &DMatrix<f64>, log_abs: &DMatrix<f64>, rel_tol: f64) -> (bool, EigSummary) {
    let p = sign.nrows();
    let mut diag = vec![0.0; p];
    for i in 0..p {
        if sign[(i, i)] < 0.0 {
            return (
                false,
                EigSummary {
                    min_eig: -1.0,
                    max_eig: 1.0,
                },
            );
        }
        diag[i] = log_abs[(i, i)];
    }
    let mut s = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            let v = sign[(i, j)];
            s[(i, j)] = if v == 0.0 {
                0.0
            } else if sign[(i, i)] == 0.0 || sign[(j, j)] == 0.0 {
                f64::INFINITY * v
            } else {
                v * (log_abs[(i, j)] - 0.5 * (diag[i] + diag[j])).exp()
            };
        }
    }
    if s.iter().any(|v| !v.is_finite()) {
        return (
            false,
            EigSummary {
                min_eig: f64::NEG_INFINITY,
                max_eig: f64::INFINITY,
            },
        );
    }
    let e = eig_summary(&s);
    (e.min_eig >= -rel_tol * e.max_eig.abs().max(1.0), e)
}

/// Assembled covariance matrix with its eigenvalue summary.
#[derive(Debug, Clone, PartialEq)]
pub struct GramResult {
    pub matrix: DMatrix<f64>,
    pub min_eig: f64,
    pub max_eig: f64,
    pub psd: bool,
    pub nnz_fraction: f64,
}

impl GramResult {
    pub fn from_matrix(matrix: DMatrix<f64>, tol: f64) -> Self {
        let n = matrix.nrows();
        let e = eig_summary(&matrix);
        let nnz = matrix.iter().filter(|v| **v != 0.0).count();
        GramResult {
            psd: e.min_eig >= -tol * e.max_eig.abs(),
            min_eig: e.min_eig,
            max_eig: e.max_eig,
            nnz_fraction: if n == 0 { 0.0 } else { nnz as f64 / (n * n) as f64 },
            matrix,
        }
    }
}

pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

pub fn check_points(points: &[Vec<f64>], d: usize) -> Result<()> {
    if let Some((k, p)) = points.iter().enumerate().find(|(_, p)| p.len() != d) {
        return Err(Error::Dimension(format!("point {k} has {} coordinates, expected {d}", p.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_and_eigs() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        check_symmetric(&m, 1e-12).unwrap();
        let e = eig_summary(&m);
        assert!((e.min_eig - 1.0).abs() < 1e-14 && (e.max_eig - 3.0).abs() < 1e-14);
        let bad = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.1, 2.0]);
        assert!(matches!(check_symmetric(&bad, 1e-12), Err(Error::Asymmetry { row: 0, col: 1, .. })));
    }

    #[test]
    fn scaled_psd() {
        let sign = DMatrix::from_element(2, 2, 1.0);
        let logs = DMatrix::from_row_slice(2, 2, &[800.0, 400.0, 400.0, 0.0]);
        assert!(psd_from_logs(&sign, &logs, 1e-10).0);
        let logs = DMatrix::from_row_slice(2, 2, &[800.0, 401.0, 401.0, 0.0]);
        assert!(!psd_from_logs(&sign, &logs, 1e-10).0);
    }
}
