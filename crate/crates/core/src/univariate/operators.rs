use super::params::{check_param_space, ln_zeta, require_space, KernelParams};
use crate::error::{Error, Result};

/// Result of moving a kernel between dimensions: parameters, target dimension and the
/// proportionality constant multiplying the target radial function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer {
    pub params: KernelParams,
    pub dim: usize,
    pub scale: f64,
}

fn zeta_ratio(p: &KernelParams, from: usize, to: usize) -> Result<f64> {
    Ok((ln_zeta(p.a, p.alpha, p.beta, p.gamma, from)? - ln_zeta(p.a, p.alpha, p.beta, p.gamma, to)?).exp())
}

/// Montée of order k: the Hankel transform of order d - k of the same spectral density.
///
/// The returned parameters are unchanged and live in dimension d - k; the radial part of the
/// montée is `scale · g_{d-k}(·; a, α, β, γ)`, which coincides pointwise with
/// `scale · g_d(·; a, α + k/2, β + k/2, γ + k/2)`.
pub fn montee(p: &KernelParams, d: usize, k: usize) -> Result<Transfer> {
    if k >= d {
        return Err(Error::Domain(format!("montée order k = {k} must be below d = {d}")));
    }
    require_space(p.alpha, p.beta, p.gamma, d)?;
    if k == 0 {
        return Ok(Transfer {
            params: *p,
            dim: d,
            scale: 1.0,
        });
    }
    Ok(Transfer {
        params: *p,
        dim: d - k,
        scale: zeta_ratio(p, d, d - k)?,
    })
}

/// Descente of order k: the Hankel transform of order d + k of the same spectral density,
/// admissible when (α, β, γ) lies in the region for dimension d + k.
pub fn descente(p: &KernelParams, d: usize, k: usize) -> Result<Transfer> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let rep = check_param_space(p.alpha, p.beta, p.gamma, d + k);
    if !rep.in_space {
        return Err(Error::ParamSpace(format!(
            "descente of order {k} from dimension {d} needs (alpha, beta, gamma) = ({}, {}, {}) in dimension {}: fails {}",
            p.alpha,
            p.beta,
            p.gamma,
            d + k,
            rep.failures().join("; ")
        )));
    }
    Ok(Transfer {
        params: *p,
        dim: d + k,
        scale: zeta_ratio(p, d, d + k)?,
    })
}

/// Restriction to a subspace of dimension d - k; the radial function is unchanged.
pub fn restrict(p: &KernelParams, d: usize, k: usize) -> Result<(KernelParams, usize)> {
    if k >= d {
        return Err(Error::Domain(format!("restriction order k = {k} must be below d = {d}")));
    }
    require_space(p.alpha, p.beta, p.gamma, d)?;
    Ok((p.shifted(-(k as f64) / 2.0), d - k))
}

/// Largest k such that the extension to dimension d + k stays in the admissible region.
pub fn max_extension(p: &KernelParams, d: usize) -> Option<usize> {
    if !check_param_space(p.alpha, p.beta, p.gamma, d).in_space {
        return None;
    }
    let mut k = 0;
    loop {
        let q = p.shifted((k + 1) as f64 / 2.0);
        if !check_param_space(q.alpha, q.beta, q.gamma, d + k + 1).in_space || k > 1 << 30 {
            return Some(k);
        }
        k += 1;
    }
}

/// Extension to dimension d + k with shapes raised by k/2.
pub fn extend(p: &KernelParams, d: usize, k: usize) -> Result<(KernelParams, usize)> {
    require_space(p.alpha, p.beta, p.gamma, d)?;
    let q = p.shifted(k as f64 / 2.0);
    let rep = check_param_space(q.alpha, q.beta, q.gamma, d + k);
    if !rep.in_space {
        let max_k = max_extension(p, d).unwrap_or(0);
        return Err(Error::ParamSpace(format!(
            "extension by k = {k} fails {}; largest admissible k is {max_k}",
            rep.failures().join("; ")
        )));
    }
    Ok((q, d + k))
}
