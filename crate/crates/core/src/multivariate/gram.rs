use nalgebra::DMatrix;

use super::params::MultivarParams;
use crate::error::Result;
use crate::linalg::{check_points, distance, GramResult};
use crate::univariate::cov_eval;

pub const MULTIVAR_PSD_TOL: f64 = 1e-8;

/// Block covariance matrix over all variables and points; block (i, j) holds variable pair (i, j).
pub fn gram_multivar(mp: &MultivarParams, points: &[Vec<f64>]) -> Result<GramResult> {
    mp.check()?;
    check_points(points, mp.d)?;
    let (p, n) = (mp.p, points.len());
    let entries = (0..p)
        .flat_map(|i| (0..p).map(move |j| (i, j)))
        .map(|(i, j)| mp.entry(i, j))
        .collect::<Result<Vec<_>>>()?;
    for e in &entries {
        cov_eval(e, mp.d, 0.0)?;
    }
    let reach = mp.max_range();
    let mut m = DMatrix::zeros(p * n, p * n);
    for k in 0..n {
        for l in 0..=k {
            let r = distance(&points[k], &points[l]);
            if r >= reach {
                continue;
            }
            for i in 0..p {
                for j in 0..p {
                    let v = mp.rho[(i, j)] * cov_eval(&entries[i * p + j], mp.d, r)?;
                    m[(i * n + k, j * n + l)] = v;
                    m[(j * n + l, i * n + k)] = v;
                }
            }
        }
    }
    Ok(GramResult::from_matrix(m, MULTIVAR_PSD_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_is_rho() {
        let rho = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let mp = MultivarParams::constant(2, 1.0, 2.0, 3.0, 4.0, rho.clone()).unwrap();
        let g = gram_multivar(&mp, &[vec![0.3, 0.1]]).unwrap();
        assert_eq!(g.matrix, rho);
        assert!(g.psd && (g.min_eig - 0.5).abs() < 1e-14);
    }

    #[test]
    fn far_points_are_block_diagonal() {
        let rho = DMatrix::from_row_slice(2, 2, &[1.0, -0.3, -0.3, 1.0]);
        let mp = MultivarParams::constant(1, 1.0, 2.0, 3.0, 4.0, rho).unwrap();
        let g = gram_multivar(&mp, &[vec![0.0], vec![5.0], vec![10.0]]).unwrap();
        for k in 0..3 {
            for l in 0..3 {
                let want = if k == l { 1.0 } else { 0.0 };
                assert_eq!(g.matrix[(k, l)], want);
                assert_eq!(g.matrix[(k, 3 + l)], -0.3 * want);
            }
        }
        assert!((g.nnz_fraction - 12.0 / 36.0).abs() < 1e-15);
        assert!(gram_multivar(&mp, &[vec![0.0, 1.0]]).is_err());
    }
}
