//! Numerical Bessel traces from samples near the conformal boundary.

use faer::Mat;
use num_complex::Complex64;

use super::BesselError;

/// Exponent centre of the two branches; `3/2` for the Kerr-AdS field in
/// `s = 1/r`, `1/2` for the flat model operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceBasis {
    pub centre: f64,
}

impl Default for TraceBasis {
    fn default() -> Self {
        Self { centre: 1.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceFit {
    pub gamma_minus: Complex64,
    pub gamma_plus: Complex64,
    pub condition: f64,
}

/// Condition number above which a fit is rejected.
pub const MAX_FIT_CONDITION: f64 = 1e10;

/// Geometric ladder `s₀ 2^{−k}`, `k = 0..7`.
pub fn ladder(s0: f64) -> Vec<f64> {
    (0..7).map(|k| s0 * 0.5f64.powi(k)).collect()
}

/// Least-squares fit of `u ≈ s^{c−ν}(b₀ + b₁s²) + s^{c+ν}(d₀ + d₁s²)`.
/// Returns `γ₋ = b₀` and `γ₊ = 2ν d₀`.
pub fn trace_fit(s: &[f64], u: &[Complex64], nu: f64, basis: TraceBasis) -> Result<TraceFit, BesselError> {
    if s.len() != u.len() || s.len() < 4 {
        return Err(BesselError::Domain("trace fit needs at least four paired samples".into()));
    }
    let exps = [basis.centre - nu, basis.centre - nu + 2.0, basis.centre + nu, basis.centre + nu + 2.0];
    let n = s.len();
    let mut a = Mat::<f64>::zeros(n, 4);
    for (i, &si) in s.iter().enumerate() {
        for (j, &e) in exps.iter().enumerate() {
            a[(i, j)] = si.powf(e);
        }
    }
    let mut scale = [0.0; 4];
    for j in 0..4 {
        scale[j] = (0..n).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt();
        for i in 0..n {
            a[(i, j)] /= scale[j];
        }
    }
    let sv = a.singular_values().map_err(|_| BesselError::IllConditionedFit { condition: f64::INFINITY })?;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = smax / smin;
    if !condition.is_finite() || condition > MAX_FIT_CONDITION {
        return Err(BesselError::IllConditionedFit { condition });
    }
    // Householder-free modified Gram-Schmidt on the real design matrix
    let mut q = a.clone();
    let mut r = [[0.0; 4]; 4];
    for j in 0..4 {
        for k in 0..j {
            let d: f64 = (0..n).map(|i| q[(i, k)] * q[(i, j)]).sum();
            r[k][j] = d;
            for i in 0..n {
                q[(i, j)] -= d * q[(i, k)];
            }
        }
        let nrm = (0..n).map(|i| q[(i, j)] * q[(i, j)]).sum::<f64>().sqrt();
        r[j][j] = nrm;
        for i in 0..n {
            q[(i, j)] /= nrm;
        }
    }
    let mut rhs = [Complex64::new(0.0, 0.0); 4];
    for j in 0..4 {
        rhs[j] = (0..n).map(|i| u[i] * q[(i, j)]).sum();
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for j in (0..4).rev() {
        let mut acc = rhs[j];
        for k in j + 1..4 {
            acc -= x[k] * r[j][k];
        }
        x[j] = acc / r[j][j];
    }
    Ok(TraceFit {
        gamma_minus: x[0] / scale[0],
        gamma_plus: x[2] / scale[2] * (2.0 * nu),
        condition,
    })
}
