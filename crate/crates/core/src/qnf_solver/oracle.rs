//! Independent one-dimensional QNF solver for the non-rotating case.
//!
//! At `a = 0` the field separates into spherical harmonics. In ingoing
//! coordinates (`f₊ = 0`) and `x = 1/r` the radial equation has polynomial
//! coefficients:
//!
//! `x²E R'' + (−2x + 2iλx² − 2Mx⁴) R' − (ν² − 9/4 + 2iλx + ℓ(ℓ+1)x²) R = 0`
//!
//! with `E = 1 + x² − 2Mx³`. The regular solution at the horizon is a
//! Frobenius series, continued by Taylor steps to a matching point, where it
//! is compared with the boundary branch selected at `x = 0`. Newton's method
//! on the Wronskian locates the frequency.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QnfError;
use crate::bessel_bc::{BcKind, BoundaryCondition};
use crate::geometry::{find_horizons, BlackHoleParams};

type C = Complex64;

fn cz(re: f64) -> C {
    C::new(re, 0.0)
}

/// Polynomial in ascending powers.
#[derive(Debug, Clone)]
struct Poly(Vec<C>);

impl Poly {
    /// Coefficients of `p(x0 + t)` in powers of `t`.
    fn shifted(&self, x0: C) -> Vec<C> {
        let mut a = self.0.clone();
        let n = a.len();
        for k in 0..n {
            for j in (k..n - 1).rev() {
                let v = a[j + 1];
                a[j] += x0 * v;
            }
        }
        a
    }
}

struct Ode {
    p2: Poly,
    p1: Poly,
    p0: Poly,
}

impl Ode {
    fn new(mass: f64, nu: f64, ell_term: f64, lambda: C) -> Self {
        let i = C::new(0.0, 1.0);
        Self {
            // x²E = x² + x⁴ − 2Mx⁵
            p2: Poly(vec![cz(0.0), cz(0.0), cz(1.0), cz(0.0), cz(1.0), cz(-2.0 * mass)]),
            p1: Poly(vec![cz(0.0), cz(-2.0), i * lambda * 2.0, cz(0.0), cz(-2.0 * mass)]),
            p0: Poly(vec![cz(-(nu * nu - 2.25)), -i * lambda * 2.0, cz(-ell_term)]),
        }
    }
}

/// Frobenius/Taylor coefficients of a solution about `x0` with leading
/// exponent `sigma`. `fixed` assigns the coefficients that the recurrence
/// leaves free (indicial resonances); any other resonance must be
/// consistent or the expansion needs logarithms and is rejected.
fn series(ode: &Ode, x0: C, sigma: C, fixed: &[(usize, C)], order: usize) -> Result<Vec<C>, QnfError> {
    let p2 = ode.p2.shifted(x0);
    let p1 = ode.p1.shifted(x0);
    let p0 = ode.p0.shifted(x0);
    let tol = 1e-13;
    let lowest = |p: &[C]| p.iter().position(|c| c.norm() > tol).unwrap_or(usize::MAX / 4) as i64;
    let g = (lowest(&p2) - 2).min(lowest(&p1) - 1).min(lowest(&p0));
    let at = |p: &[C], idx: i64| -> C {
        if idx < 0 || idx as usize >= p.len() {
            cz(0.0)
        } else {
            p[idx as usize]
        }
    };
    let f = |nn: usize, n: usize| -> C {
        let s = sigma + n as f64;
        let d = (nn - n) as i64;
        at(&p2, d + 2 + g) * s * (s - 1.0) + at(&p1, d + 1 + g) * s + at(&p0, d + g)
    };
    let mut c = vec![cz(0.0); order];
    for nn in 0..order {
        if let Some(&(_, v)) = fixed.iter().find(|(k, _)| *k == nn) {
            c[nn] = v;
            continue;
        }
        let mut rhs = cz(0.0);
        for n in 0..nn {
            rhs -= c[n] * f(nn, n);
        }
        let diag = f(nn, nn);
        let scale = (0..nn).map(|n| (c[n] * f(nn, n)).norm()).fold(0.0, f64::max).max(1e-300);
        if diag.norm() < 1e-12 * (1.0 + sigma.norm() + nn as f64).powi(2) {
            if rhs.norm() > 1e-9 * scale {
                return Err(QnfError::SeriesRadius(format!("logarithmic resonance at order {nn}")));
            }
            c[nn] = cz(0.0);
        } else {
            c[nn] = rhs / diag;
        }
    }
    Ok(c)
}

/// Value and derivative of `Σ c_n t^{n+σ}` at `t`.
fn eval_series(c: &[C], sigma: C, t: C) -> (C, C) {
    let (mut v, mut dv) = (cz(0.0), cz(0.0));
    for &cn in c.iter().rev() {
        dv = dv * t + v;
        v = v * t + cn;
    }
    if sigma == cz(0.0) {
        return (v, dv);
    }
    let tp = t.powc(sigma);
    (tp * v, tp * (dv + sigma * v / t))
}

fn e_roots(mass: f64) -> Vec<C> {
    // roots of −2Mx³ + x² + 1 via the companion matrix of the monic cubic
    let a2 = -1.0 / (2.0 * mass);
    let a0 = -1.0 / (2.0 * mass);
    let m = Mat::<C>::from_fn(3, 3, |i, j| match (i, j) {
        (0, 2) => cz(-a0),
        (1, 0) | (2, 1) => cz(1.0),
        (2, 2) => cz(-a2),
        _ => cz(0.0),
    });
    m.eigenvalues().unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Series truncation order.
    pub order: usize,
    pub max_newton: usize,
    pub tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { order: 80, max_newton: 60, tol: 1e-13 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub lambda: Complex64,
    /// Normalized matching determinant at `lambda`.
    pub determinant: f64,
    pub order: usize,
    /// `|λ(order) − λ(2·order)|`.
    pub certificate: f64,
}

struct Shooter {
    mass: f64,
    nu: f64,
    ell_term: f64,
    x_plus: f64,
    singular: Vec<C>,
    bc: Option<BoundaryCondition>,
}

impl Shooter {
    fn dist_to_singular(&self, x: C) -> f64 {
        self.singular.iter().map(|s| (s - x).norm()).filter(|d| *d > 1e-12).fold(f64::INFINITY, f64::min)
    }

    fn boundary_exponent(&self) -> f64 {
        match self.bc.map(|b| b.kind) {
            Some(BcKind::Dirichlet) | None => 1.5 + self.nu,
            Some(_) if (self.nu - 0.5).abs() < 1e-12 => 1.0,
            Some(_) => 1.5 - self.nu,
        }
    }

    /// Free coefficients of the boundary branch. At `ν = 1/2` the branch `x`
    /// carries a free `x²` coefficient fixed by the condition, written in the
    /// default extension where `u_default = e^{iλ arctan x} u_ingoing`.
    fn boundary_fixed(&self, lambda: C) -> Vec<(usize, C)> {
        let i = C::new(0.0, 1.0);
        let half = (self.nu - 0.5).abs() < 1e-12;
        let robin = |beta: C| vec![(0, cz(1.0)), (1, -(beta + i * lambda))];
        match self.bc.map(|b| b.kind) {
            Some(BcKind::Neumann) if half => robin(cz(0.0)),
            Some(BcKind::Robin { beta }) if half => robin(beta),
            Some(BcKind::LambdaRobin { beta0, beta1 }) if half => robin(beta0 + beta1 * lambda),
            _ => vec![(0, cz(1.0))],
        }
    }

    fn matching_point(&self) -> f64 {
        let r0 = self.dist_to_singular(cz(0.0));
        (0.4 * r0).min(0.5 * self.x_plus)
    }

    fn wronskian(&self, lambda: C, order: usize) -> Result<(C, f64), QnfError> {
        let ode = Ode::new(self.mass, self.nu, self.ell_term, lambda);
        let xp = cz(self.x_plus);
        let hs = series(&ode, xp, cz(0.0), &[(0, cz(1.0))], order)?;
        let xm = self.matching_point();
        let mut x = xp;
        let step0 = 0.5 * self.dist_to_singular(xp);
        let mut h = step0.min(self.x_plus - xm);
        let (mut u, mut du) = eval_series(&hs, cz(0.0), cz(-h));
        x -= h;
        while x.re - xm > 1e-14 {
            h = (0.5 * self.dist_to_singular(x)).min(x.re - xm);
            let ts = series(&ode, x, cz(0.0), &[(0, u), (1, du)], order)?;
            let (u2, du2) = eval_series(&ts, cz(0.0), cz(-h));
            u = u2;
            du = du2;
            x -= h;
        }
        let sb = cz(self.boundary_exponent());
        let bs = series(&ode, cz(0.0), sb, &self.boundary_fixed(lambda), order)?;
        let (ub, dub) = eval_series(&bs, sb, x);
        let w = u * dub - du * ub;
        let scale = u.norm() * dub.norm() + du.norm() * ub.norm();
        Ok((w, w.norm() / scale))
    }
}

fn shooter(p: &BlackHoleParams, ell_term: f64, bc: Option<BoundaryCondition>) -> Result<Shooter, QnfError> {
    if p.a != 0.0 {
        return Err(QnfError::ConfigurationInvalid("the separable oracle needs a = 0".into()));
    }
    if p.nu < 1.0 && bc.is_none() {
        return Err(QnfError::InvalidMode("0 < ν < 1 requires a boundary condition".into()));
    }
    let h = find_horizons(p)?;
    let mut singular = e_roots(p.mass);
    singular.push(cz(0.0));
    Ok(Shooter { mass: p.mass, nu: p.nu, ell_term, x_plus: 1.0 / h.r_plus, singular, bc })
}

fn newton(sh: &Shooter, mut lam: C, opts: &OracleOptions, order: usize) -> Result<(C, f64), QnfError> {
    for _ in 0..opts.max_newton {
        let (w, _) = sh.wronskian(lam, order)?;
        let h = 1e-6 * (1.0 + lam.norm());
        let (wp, _) = sh.wronskian(lam + h, order)?;
        let (wm, _) = sh.wronskian(lam - h, order)?;
        let dw = (wp - wm) / (2.0 * h);
        let step = w / dw;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Err(QnfError::NoConvergence(format!("non-finite Newton step at λ = {lam}")));
        }
        lam -= step;
        if step.norm() < opts.tol * (1.0 + lam.norm()) {
            let (_, det) = sh.wronskian(lam, order)?;
            return Ok((lam, det));
        }
    }
    Err(QnfError::NoConvergence(format!("no convergence after {} Newton steps (λ ≈ {lam})", opts.max_newton)))
}

/// Refines the QNF nearest `lambda_init` for angular index `ell` (with
/// `ℓ(ℓ+1)` allowed to be any real value via [`frobenius_oracle_a0_continuous`]).
pub fn frobenius_oracle_a0(
    p: &BlackHoleParams,
    ell: u32,
    bc: Option<BoundaryCondition>,
    lambda_init: Complex64,
    opts: &OracleOptions,
) -> Result<OracleResult, QnfError> {
    frobenius_oracle_a0_continuous(p, (ell * (ell + 1)) as f64, bc, lambda_init, opts)
}

/// Same as [`frobenius_oracle_a0`] with the angular eigenvalue `ℓ(ℓ+1)` given
/// directly, which permits continuation in it.
pub fn frobenius_oracle_a0_continuous(
    p: &BlackHoleParams,
    ell_term: f64,
    bc: Option<BoundaryCondition>,
    lambda_init: Complex64,
    opts: &OracleOptions,
) -> Result<OracleResult, QnfError> {
    let sh = shooter(p, ell_term, bc)?;
    let (lam, det) = newton(&sh, lambda_init, opts, opts.order)?;
    let (lam2, _) = newton(&sh, lam, opts, 2 * opts.order)?;
    Ok(OracleResult { lambda: lam, determinant: det, order: opts.order, certificate: (lam - lam2).norm() })
}

/// Follows a root from `ℓ(ℓ+1) = from` to `to` in `steps` increments.
pub fn continue_in_ell(
    p: &BlackHoleParams,
    from: f64,
    to: f64,
    steps: usize,
    bc: Option<BoundaryCondition>,
    lambda_start: Complex64,
    opts: &OracleOptions,
) -> Result<OracleResult, QnfError> {
    let sh0 = shooter(p, from, bc)?;
    let (mut lam, _) = newton(&sh0, lambda_start, opts, opts.order)?;
    for k in 1..=steps {
        let l = from + (to - from) * k as f64 / steps as f64;
        let sh = shooter(p, l, bc)?;
        lam = newton(&sh, lam, opts, opts.order)?.0;
    }
    frobenius_oracle_a0_continuous(p, to, bc, lam, opts)
}

/// Normalized matching determinant at an arbitrary `λ`.
pub fn matching_determinant(
    p: &BlackHoleParams,
    ell: u32,
    bc: Option<BoundaryCondition>,
    lambda: Complex64,
    order: usize,
) -> Result<f64, QnfError> {
    Ok(shooter(p, (ell * (ell + 1)) as f64, bc)?.wronskian(lambda, order)?.1)
}
