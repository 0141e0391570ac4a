//! Dense quadratic eigenvalue solve.
//!
//! `P(σ + τ) = B0 + τB1 + τ²A2` with `B0 = P(σ)`. Writing `μ = 1/τ` gives the
//! standard eigenproblem for `[[0, I], [−B0⁻¹A2, −B0⁻¹B1]]`, whose large
//! eigenvalues `μ` are the pencil eigenvalues closest to the shift. Every
//! candidate in the window is then refined by two-sided Newton iteration on
//! the pencil itself.

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::Parity;
use super::pencil::QnfPencil;
use super::QnfError;
use crate::linalg::{dotc, matvec, normalize, CMat, Lu};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub im_min: f64,
    pub im_max: f64,
    pub re_abs_max: f64,
}

impl Window {
    /// `Im λ ∈ (−κ(1/2+k) + 0.1κ, 10κ]`, `|Re λ| ≤ 10κ`.
    pub fn default_for(kappa: f64, k: f64) -> Self {
        Self { im_min: -kappa * (0.5 + k) + 0.1 * kappa, im_max: 10.0 * kappa, re_abs_max: 10.0 * kappa }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.im > self.im_min && z.im <= self.im_max && z.re.abs() <= self.re_abs_max
    }

    fn widened(&self, frac: f64) -> Self {
        let h = (self.im_max - self.im_min) * frac;
        Self { im_min: self.im_min - h, im_max: self.im_max + h, re_abs_max: self.re_abs_max * (1.0 + frac) }
    }

    pub fn centre(&self) -> Complex64 {
        Complex64::new(0.0, 0.5 * (self.im_min + self.im_max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QnfResult {
    pub lambda: Complex64,
    /// `max|P(λ)v| / max_i Σ_j |P_ij||v_j|`.
    pub residual: f64,
    pub converged: bool,
    pub halfplane_ok: bool,
    pub parity: Option<Parity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QepOptions {
    /// Newton iterations per candidate.
    pub max_newton: usize,
    /// Shift retries when `P(σ)` is numerically singular.
    pub shift_retries: usize,
    pub pivot_tol: f64,
}

impl Default for QepOptions {
    fn default() -> Self {
        Self { max_newton: 8, shift_retries: 4, pivot_tol: 1e-14 }
    }
}

/// Normalized residual of `P v` in the maximum norm.
pub fn pencil_residual(p: &CMat, v: &[Complex64]) -> f64 {
    let pv = matvec(p, v);
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for i in 0..p.nrows() {
        num = num.max(pv[i].norm());
        let mut row = 0.0;
        for j in 0..p.ncols() {
            row += p[(i, j)].norm() * v[j].norm();
        }
        den = den.max(row);
    }
    if den == 0.0 { f64::INFINITY } else { num / den }
}

fn start_vector(n: usize, salt: u64) -> Vec<Complex64> {
    // fixed pseudo-random start; determinism matters more than quality
    let mut st = 0x9e37_79b9_7f4a_7c15u64 ^ salt;
    (0..n)
        .map(|_| {
            st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((st >> 11) as f64) / ((1u64 << 53) as f64) - 0.5;
            st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((st >> 11) as f64) / ((1u64 << 53) as f64) - 0.5;
            Complex64::new(a, b)
        })
        .collect()
}

/// Newton refinement of one eigenvalue. Returns `(λ, residual)`.
pub fn refine(pencil: &QnfPencil, lambda0: Complex64, max_newton: usize) -> Option<(Complex64, f64)> {
    let n = pencil.dim();
    let b = start_vector(n, 1);
    let bw = start_vector(n, 2);
    let mut lam = lambda0;
    let mut v = b.clone();
    for _ in 0..max_newton.max(1) {
        let p = pencil.eval(lam);
        let lu = Lu::new(&p);
        v = lu.solve(&b);
        normalize(&mut v);
        v = lu.solve(&v);
        normalize(&mut v);
        let mut w = lu.solve_adj(&bw);
        normalize(&mut w);
        w = lu.solve_adj(&w);
        normalize(&mut w);
        let num = dotc(&w, &matvec(&p, &v));
        let den = dotc(&w, &matvec(&pencil.eval_derivative(lam), &v));
        let step = num / den;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        lam -= step;
        if step.norm() < 1e-14 * (1.0 + lam.norm()) {
            break;
        }
    }
    if !lam.re.is_finite() || !lam.im.is_finite() {
        return None;
    }
    let res = pencil_residual(&pencil.eval(lam), &v);
    Some((lam, res))
}

/// Raw eigenvalue estimates of the pencil near `sigma`, before refinement.
pub fn companion_eigenvalues(pencil: &QnfPencil, sigma: Complex64, opts: &QepOptions) -> Result<Vec<Complex64>, QnfError> {
    let n = pencil.dim();
    let mut shift = sigma;
    let mut worst = 0.0;
    for attempt in 0..=opts.shift_retries {
        let b0 = pencil.eval(shift);
        let lu = Lu::new(&b0);
        worst = lu.min_pivot_ratio;
        if lu.min_pivot_ratio < opts.pivot_tol {
            let bump = 0.1 * (attempt + 1) as f64;
            shift = sigma + Complex64::new(0.37 * bump, 0.23 * bump);
            continue;
        }
        let b1 = Mat::from_fn(n, n, |i, j| pencil.a1[(i, j)] + shift * 2.0 * pencil.a2[(i, j)]);
        let x = lu.solve_mat(&pencil.a2);
        let y = lu.solve_mat(&b1);
        let mut c = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            c[(i, n + i)] = Complex64::new(1.0, 0.0);
            for j in 0..n {
                c[(n + i, j)] = -x[(i, j)];
                c[(n + i, n + j)] = -y[(i, j)];
            }
        }
        let mus = c.eigenvalues().map_err(|e| QnfError::Eigensolver(format!("{e:?}")))?;
        let scale = mus.iter().map(|m| m.norm()).fold(0.0, f64::max);
        return Ok(mus
            .into_iter()
            .filter(|m| m.norm() > 1e-13 * scale.max(1e-300))
            .map(|m| shift + Complex64::new(1.0, 0.0) / m)
            .collect());
    }
    Err(QnfError::LinearizationSingular { attempts: opts.shift_retries + 1, min_pivot_ratio: worst })
}

/// Eigenvalues of the pencil inside `window`, refined and deduplicated.
/// `converged` is left `false`; it is set by the convergence filter.
pub fn solve_qep(pencil: &QnfPencil, window: &Window, opts: &QepOptions) -> Result<Vec<QnfResult>, QnfError> {
    let raw = companion_eigenvalues(pencil, window.centre(), opts)?;
    let wide = window.widened(0.1);
    let cands: Vec<Complex64> = raw.into_iter().filter(|z| wide.contains(*z)).collect();
    let mut refined: Vec<(Complex64, f64)> =
        cands.par_iter().filter_map(|&z| refine(pencil, z, opts.max_newton)).filter(|(z, _)| window.contains(*z)).collect();
    refined.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<(Complex64, f64)> = Vec::new();
    for (z, r) in refined {
        if out.iter().all(|(y, _)| (z - y).norm() > 1e-9 * (1.0 + z.norm())) {
            out.push((z, r));
        }
    }
    out.sort_by(|a, b| a.0.im.partial_cmp(&b.0.im).unwrap().reverse().then(a.0.re.partial_cmp(&b.0.re).unwrap()));
    let threshold = -pencil.meta.kappa * (0.5 + pencil.meta.mode.k_threshold);
    Ok(out
        .into_iter()
        .map(|(lambda, residual)| QnfResult {
            lambda,
            residual,
            converged: false,
            halfplane_ok: lambda.im > threshold,
            parity: pencil.meta.parity,
        })
        .collect())
}
