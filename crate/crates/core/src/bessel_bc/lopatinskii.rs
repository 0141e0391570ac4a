//! Parameter-dependent Lopatinskiĭ audit.
//!
//! At a boundary point the frozen model problem is
//! `−u'' + (ν²−1/4)x⁻²u + A°(η, λ)u = 0` with decaying solution
//! `x^{1/2}K_ν(x√A°)`. The condition is satisfied when the principal
//! boundary symbol does not annihilate the traces of that solution.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::special::model_coefficients;
use super::{BcKind, BesselError, BoundaryCondition};
use crate::geometry::BlackHoleParams;

/// A point `(θ, η_θ, η_φ, λ)` of the boundary cotangent bundle times the
/// spectral sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub theta: f64,
    pub eta_theta: f64,
    pub eta_phi: f64,
    pub lambda: Complex64,
}

/// Principal symbol `(t₋, t₊)` of a boundary operator.
pub trait PrincipalBoundarySymbol: Sync {
    fn principal(&self, sample: &BoundarySample) -> (Complex64, Complex64);
    fn label(&self) -> String;
}

impl BoundaryCondition {
    /// Principal part for the given `ν`. Only terms whose order reaches the
    /// top for `μ` survive: constant Robin coefficients drop out, the
    /// `λβ₁γ₋` term survives only when `⌈2ν⌉ = 1`.
    pub fn principal_symbol(&self, nu: f64, lambda: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self.kind {
            BcKind::Dirichlet => (one, zero),
            BcKind::Neumann | BcKind::Robin { .. } => (zero, one),
            BcKind::LambdaRobin { beta1, .. } => {
                if (2.0 * nu).ceil() <= 1.0 {
                    (lambda * beta1, one)
                } else {
                    (zero, one)
                }
            }
        }
    }
}

struct BcWithNu<'a> {
    bc: &'a BoundaryCondition,
    nu: f64,
}

impl PrincipalBoundarySymbol for BcWithNu<'_> {
    fn principal(&self, s: &BoundarySample) -> (Complex64, Complex64) {
        self.bc.principal_symbol(self.nu, s.lambda)
    }
    fn label(&self) -> String {
        self.bc.name()
    }
}

/// User-supplied principal symbol.
pub struct CustomBoundarySymbol<F>
where
    F: Fn(&BoundarySample) -> (Complex64, Complex64) + Sync,
{
    pub name: String,
    pub symbol: F,
}

impl<F> PrincipalBoundarySymbol for CustomBoundarySymbol<F>
where
    F: Fn(&BoundarySample) -> (Complex64, Complex64) + Sync,
{
    fn principal(&self, s: &BoundarySample) -> (Complex64, Complex64) {
        (self.symbol)(s)
    }
    fn label(&self) -> String {
        self.name.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LopatinskiiOptions {
    pub n_samples: usize,
    /// Sector half-opening margin: `arg λ ∈ [ε, π−ε]`.
    pub sector_eps: f64,
    pub seed: u64,
    pub threshold: f64,
    /// Polar cap excluded from the θ samples.
    pub theta_margin: f64,
}

impl Default for LopatinskiiOptions {
    fn default() -> Self {
        Self { n_samples: 10_000, sector_eps: 0.05, seed: 0, threshold: 1e-6, theta_margin: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub sample: BoundarySample,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LopatinskiiReport {
    pub nu: f64,
    pub bc: String,
    pub n_samples: usize,
    pub min_margin: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Boundary symbol `A°(η, λ)` of the Kerr-AdS operator.
pub fn boundary_symbol(p: &BlackHoleParams, s: &BoundarySample) -> Complex64 {
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let (sn, cs) = s.theta.sin_cos();
    let dth = 1.0 - alpha * cs * cs;
    let shifted = Complex64::new(s.eta_phi, 0.0) - s.lambda * (p.a * sn * sn);
    s.eta_theta * s.eta_theta * dth + shifted * shifted * (oa * oa / (dth * sn * sn)) - s.lambda * s.lambda * (oa * oa)
}

/// Traces `(γ₋, γ₊)` of the decaying model solution at this sample, or
/// `None` when `A°` sits on the closed negative axis.
pub fn model_traces(p: &BlackHoleParams, s: &BoundarySample) -> Option<(Complex64, Complex64)> {
    let a0 = boundary_symbol(p, s);
    if a0.im.abs() <= 1e-300 && a0.re <= 0.0 {
        return None;
    }
    let k = a0.sqrt();
    let (am, ap) = model_coefficients(p.nu, k);
    Some((am, ap * (2.0 * p.nu)))
}

pub fn margin_at(p: &BlackHoleParams, sym: &dyn PrincipalBoundarySymbol, s: &BoundarySample) -> f64 {
    let Some((gm, gp)) = model_traces(p, s) else { return 0.0 };
    let (tm, tp) = sym.principal(s);
    let tn = (tm.norm_sqr() + tp.norm_sqr()).sqrt();
    let gn = (gm.norm_sqr() + gp.norm_sqr()).sqrt();
    if tn == 0.0 || gn == 0.0 || !gn.is_finite() {
        return 0.0;
    }
    (tm * gm + tp * gp).norm() / (tn * gn)
}

/// Deterministic samples on `|η|² + |λ|² = 1` with `λ` in the sector.
pub fn samples(opts: &LopatinskiiOptions) -> Vec<BoundarySample> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let lo = opts.sector_eps;
    let hi = std::f64::consts::PI - opts.sector_eps;
    let mut out = Vec::with_capacity(opts.n_samples);
    while out.len() < opts.n_samples {
        let theta = rng.gen_range(opts.theta_margin..std::f64::consts::PI - opts.theta_margin);
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1.0 || n < 1e-3 {
            continue;
        }
        let lambda = Complex64::new(v[2] / n, v[3] / n);
        let arg = lambda.arg();
        if arg < lo || arg > hi {
            continue;
        }
        out.push(BoundarySample { theta, eta_theta: v[0] / n, eta_phi: v[1] / n, lambda });
    }
    out
}

fn run(p: &BlackHoleParams, sym: &dyn PrincipalBoundarySymbol, opts: &LopatinskiiOptions) -> LopatinskiiReport {
    let pts = samples(opts);
    let margins: Vec<f64> = pts.par_iter().map(|s| margin_at(p, sym, s)).collect();
    let (idx, min) = margins
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bm), (i, &m)| if m < bm { (i, m) } else { (bi, bm) });
    let passed = min > opts.threshold;
    LopatinskiiReport {
        nu: p.nu,
        bc: sym.label(),
        n_samples: pts.len(),
        min_margin: min,
        passed,
        witness: (!passed && !pts.is_empty()).then(|| Witness { sample: pts[idx], margin: min }),
    }
}

/// Audits a boundary condition over the sampled boundary cotangent sphere.
pub fn lopatinskii_check(
    p: &BlackHoleParams,
    bc: &BoundaryCondition,
    opts: &LopatinskiiOptions,
) -> Result<LopatinskiiReport, BesselError> {
    check_nu(p.nu)?;
    bc.validate(p.nu)?;
    Ok(run(p, &BcWithNu { bc, nu: p.nu }, opts))
}

/// Same audit for an arbitrary principal symbol.
pub fn lopatinskii_check_symbol(
    p: &BlackHoleParams,
    sym: &dyn PrincipalBoundarySymbol,
    opts: &LopatinskiiOptions,
) -> Result<LopatinskiiReport, BesselError> {
    check_nu(p.nu)?;
    Ok(run(p, sym, opts))
}

fn check_nu(nu: f64) -> Result<(), BesselError> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(BesselError::UnsupportedNu { bc: "any".into(), nu })
    }
}
