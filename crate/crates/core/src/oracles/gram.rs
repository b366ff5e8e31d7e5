use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{check_points, distance, GramResult};
use crate::univariate::{cov_eval, KernelParams};

pub const GRAM_PSD_TOL: f64 = 1e-10;
const SIM_PSD_TOL: f64 = 1e-8;

/// Covariance matrix over `points`, skipping pairs beyond the range.
pub fn gram(points: &[Vec<f64>], p: &KernelParams, d: usize) -> Result<GramResult> {
    check_points(points, d)?;
    cov_eval(p, d, 0.0)?;
    let n = points.len();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = p.sigma2;
        for l in 0..k {
            let r = distance(&points[k], &points[l]);
            if r >= p.a {
                continue;
            }
            let v = cov_eval(p, d, r)?;
            m[(k, l)] = v;
            m[(l, k)] = v;
        }
    }
    Ok(GramResult::from_matrix(m, GRAM_PSD_TOL))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    /// One realization per row.
    pub samples: DMatrix<f64>,
    pub empirical_cov: DMatrix<f64>,
    /// Sum of the negative eigenvalues that were clipped to zero.
    pub clipped_mass: f64,
    pub warning: Option<String>,
}

/// Gaussian realizations over `points` from the symmetric square root of the Gram matrix.
/// Realization i draws from a ChaCha8 stream keyed by (seed, i).
pub fn simulate_field(
    points: &[Vec<f64>],
    p: &KernelParams,
    d: usize,
    n_realizations: usize,
    seed: u64,
) -> Result<Simulation> {
    let g = gram(points, p, d)?;
    if g.min_eig < -SIM_PSD_TOL * g.max_eig.abs() {
        return Err(Error::Precondition(format!(
            "Gram matrix is not positive semidefinite (min eigenvalue {:e})",
            g.min_eig
        )));
    }
    let n = points.len();
    let eig = SymmetricEigen::new(g.matrix.clone());
    let mut clipped_mass = 0.0;
    let roots = eig.eigenvalues.map(|l| {
        if l < 0.0 {
            clipped_mass -= l;
        }
        l.max(0.0).sqrt()
    });
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose();
    let trace: f64 = g.matrix.diagonal().sum();
    let warning = (clipped_mass > 1e-8 * trace)
        .then(|| format!("clipped negative eigenvalue mass {clipped_mass:e} exceeds 1e-8 of the trace"));
    let mut samples = DMatrix::zeros(n_realizations, n);
    for i in 0..n_realizations {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let z = nalgebra::DVector::from_vec(z);
        let y = &root * z;
        samples.row_mut(i).copy_from(&y.transpose());
    }
    let empirical_cov = if n_realizations == 0 {
        DMatrix::zeros(n, n)
    } else {
        samples.transpose() * &samples / n_realizations as f64
    };
    Ok(Simulation {
        samples,
        empirical_cov,
        clipped_mass,
        warning,
    })
}
