//! Principal symbol and rescaled Hamilton flow on the radially compactified
//! cotangent bundle.
//!
//! Points are written in projective fibre coordinates `ρ = |ξ_r|⁻¹`,
//! `ξ̂ = ξ/|ξ_r|`, so fibre infinity is `ρ = 0`. The flow is the Hamilton
//! field of the principal symbol `σ₂` multiplied by `ρ`, which extends
//! smoothly to `ρ = 0`.

pub mod audit;
pub mod flow;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{d_delta_r, delta_r, BlackHoleParams, ExtensionVariant, GeometryError};

pub use audit::{
    sample_near_radial_set,
    characteristic_bound_check, nontrapping_audit, sample_characteristic, source_sink_audit, AuditOptions,
    CharacteristicReport, NontrappingReport, SourceSinkReport,
};
pub use flow::{integrate_flow, Direction, FlowOptions, FlowOutcome, Terminal};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("point outside the projective chart: {0}")]
    ChartViolation(String),
    #[error("trajectory left the chart at t = {time}: {reason}")]
    ChartExit { time: f64, reason: String },
    #[error("step size underflow at t = {time}")]
    StepFailure { time: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub rho: f64,
    pub xi_hat_theta: f64,
    pub xi_hat_phi: f64,
    pub sigma: i8,
}

impl PhasePoint {
    pub fn new(r: f64, theta: f64, phi: f64, rho: f64, xi_hat_theta: f64, xi_hat_phi: f64, sigma: i8) -> Result<Self, PhaseError> {
        let p = Self { r, theta, phi, rho, xi_hat_theta, xi_hat_phi, sigma };
        if ![r, theta, phi, rho, xi_hat_theta, xi_hat_phi].iter().all(|x| x.is_finite()) {
            return Err(PhaseError::ChartViolation("non-finite coordinate".into()));
        }
        if rho < 0.0 {
            return Err(PhaseError::ChartViolation(format!("ρ = {rho} < 0")));
        }
        if sigma != 1 && sigma != -1 {
            return Err(PhaseError::ChartViolation(format!("σ = {sigma} must be ±1")));
        }
        if r <= 0.0 {
            return Err(PhaseError::ChartViolation(format!("r = {r} must be positive")));
        }
        Ok(p)
    }

    /// Chart point for a finite covector. Requires `ξ_r ≠ 0`.
    pub fn from_covector(r: f64, theta: f64, phi: f64, xi_r: f64, xi_theta: f64, xi_phi: f64) -> Result<Self, PhaseError> {
        if xi_r == 0.0 || !xi_r.is_finite() {
            return Err(PhaseError::ChartViolation("ξ_r = 0 is outside the chart".into()));
        }
        let inv = 1.0 / xi_r.abs();
        Self::new(r, theta, phi, inv, xi_theta * inv, xi_phi * inv, if xi_r > 0.0 { 1 } else { -1 })
    }

    /// `(ξ_r, ξ_θ, ξ_φ)`, or `None` at fibre infinity.
    pub fn covector(&self) -> Option<[f64; 3]> {
        (self.rho > 0.0).then(|| {
            let k = 1.0 / self.rho;
            [self.sigma as f64 * k, self.xi_hat_theta * k, self.xi_hat_phi * k]
        })
    }

    pub(crate) fn to_state(self) -> [f64; 6] {
        [self.r, self.theta, self.phi, self.rho, self.xi_hat_theta, self.xi_hat_phi]
    }

    pub(crate) fn from_state(y: &[f64; 6], sigma: i8) -> Self {
        Self { r: y[0], theta: y[1], phi: y[2], rho: y[3], xi_hat_theta: y[4], xi_hat_phi: y[5], sigma }
    }
}

/// Symbol data; at chart points all quantities are multiplied by `ρ²`, so
/// they stay finite at fibre infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolValue {
    pub p: f64,
    pub q: f64,
    pub p1: f64,
    pub p2: f64,
    pub rho1: f64,
}

fn sin_theta_sq(theta: f64) -> f64 {
    let s = theta.sin();
    s * s
}

/// `G(ζ)` with `ζ = (ζ_t, ζ_r, ζ_θ, ζ_φ)` written in the completed-square
/// form, which stays finite at the axis when `ζ_φ = 0`.
fn dual_form(p: &BlackHoleParams, variant: &ExtensionVariant, r: f64, theta: f64, z: [Complex64; 4]) -> Complex64 {
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let a = p.a;
    let s2 = sin_theta_sq(theta);
    let c = theta.cos();
    let dth = 1.0 - alpha * c * c;
    let dr = delta_r(p, r);
    let f = variant.f_plus(p, r);
    let w = r * r + a * a;
    let [zt, zr, zth, zph] = z;
    let rad = zr + zt * f;
    let ang = if zph == Complex64::new(0.0, 0.0) {
        zt * zt * (a * a * s2 / dth)
    } else {
        let v = zph + zt * (a * s2);
        v * v / (dth * s2)
    };
    rad * rad * dr + zth * zth * dth + rad * (zph * a + zt * w) * (2.0 * oa) + ang * (oa * oa)
}

/// `p − iq = G(ξ − z dt)` at a finite covector.
pub fn symbol_finite(
    p: &BlackHoleParams,
    variant: &ExtensionVariant,
    r: f64,
    theta: f64,
    xi: [f64; 3],
    z: Complex64,
) -> SymbolValue {
    let c = |x: f64| Complex64::new(x, 0.0);
    let g = dual_form(p, variant, r, theta, [-z, c(xi[0]), c(xi[1]), c(xi[2])]);
    let (p1, p2) = kinetic_parts(p, r, theta, xi[0], xi[1], xi[2]);
    let n = xi[0].abs();
    SymbolValue { p: g.re, q: -g.im, p1, p2, rho1: if n > 0.0 { (1.0 + p1 + p2) / (n * n) } else { f64::INFINITY } }
}

fn kinetic_parts(p: &BlackHoleParams, r: f64, theta: f64, xr: f64, xth: f64, xph: f64) -> (f64, f64) {
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let c = theta.cos();
    let dth = 1.0 - alpha * c * c;
    let s2 = sin_theta_sq(theta);
    let p1 = dth * xth * xth + if xph == 0.0 { 0.0 } else { oa * oa * xph * xph / (dth * s2) };
    let t = delta_r(p, r) * xr + 2.0 * oa * p.a * xph;
    (p1, t * t)
}

/// Symbol at a chart point, rescaled by `ρ²`; at `ρ = 0` this is the
/// homogeneous principal part.
pub fn symbol(p: &BlackHoleParams, variant: &ExtensionVariant, x: &PhasePoint, z: Complex64) -> SymbolValue {
    let c = |v: f64| Complex64::new(v, 0.0);
    let g = dual_form(p, variant, x.r, x.theta, [-z * x.rho, c(x.sigma as f64), c(x.xi_hat_theta), c(x.xi_hat_phi)]);
    let (p1, p2) = kinetic_parts(p, x.r, x.theta, x.sigma as f64, x.xi_hat_theta, x.xi_hat_phi);
    SymbolValue { p: g.re, q: -g.im, p1, p2, rho1: x.rho * x.rho + p1 + p2 }
}

/// Principal symbol `σ₂(x, ξ)`.
pub fn principal(p: &BlackHoleParams, r: f64, theta: f64, xi: [f64; 3]) -> f64 {
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let c = theta.cos();
    let dth = 1.0 - alpha * c * c;
    let s2 = sin_theta_sq(theta);
    let [xr, xth, xph] = xi;
    let ang = if xph == 0.0 { 0.0 } else { oa * oa * xph * xph / (dth * s2) };
    delta_r(p, r) * xr * xr + 2.0 * p.a * oa * xr * xph + dth * xth * xth + ang
}

/// `q̂ = 2 Im z (G^{rt}σ + G^{tφ}ξ̂_φ)`, the rescaled imaginary part at fibre
/// infinity.
pub fn q_hat(p: &BlackHoleParams, variant: &ExtensionVariant, x: &PhasePoint, z: Complex64) -> f64 {
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let a = p.a;
    let r = x.r;
    let c = x.theta.cos();
    let dth = 1.0 - alpha * c * c;
    let f = variant.f_plus(p, r);
    let g_rt = delta_r(p, r) * f + oa * (r * r + a * a);
    let g_tphi = oa * a * f + oa * oa * a / dth;
    2.0 * z.im * (g_rt * x.sigma as f64 + g_tphi * x.xi_hat_phi)
}

/// `ρ·H_{σ₂}` in the coordinates `(r, θ, φ, ρ, ξ̂_θ, ξ̂_φ)`.
pub fn hamilton_field(p: &BlackHoleParams, x: &PhasePoint) -> [f64; 6] {
    field_state(p, &x.to_state(), x.sigma)
}

pub(crate) fn field_state(p: &BlackHoleParams, y: &[f64; 6], sigma: i8) -> [f64; 6] {
    let [r, theta, _phi, rho, xt, xp] = *y;
    let sg = sigma as f64;
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let a = p.a;
    let (sn, cs) = theta.sin_cos();
    let s2 = sn * sn;
    let dth = 1.0 - alpha * cs * cs;
    let dr = delta_r(p, r);
    let ddr = d_delta_r(p, r);
    // ∂_θ of Δ_θ and of 1/(Δ_θ sin²θ)
    let d_dth = 2.0 * alpha * cs * sn;
    let (phi_dot, d_theta_sigma) = if xp == 0.0 {
        (2.0 * a * oa * sg, d_dth * xt * xt)
    } else {
        let inv = 1.0 / (dth * s2);
        let d_inv = -2.0 * sn * cs * (alpha * s2 + dth) * inv * inv;
        (2.0 * a * oa * sg + 2.0 * oa * oa * xp * inv, d_dth * xt * xt + oa * oa * xp * xp * d_inv)
    };
    [
        2.0 * dr * sg + 2.0 * a * oa * xp,
        2.0 * dth * xt,
        phi_dot,
        sg * rho * ddr,
        -d_theta_sigma + sg * xt * ddr,
        sg * xp * ddr,
    ]
}

/// `ρ₁ = ρ² + p̂₁ + p̂₂` on the state vector.
pub(crate) fn rho1_state(p: &BlackHoleParams, y: &[f64; 6], sigma: i8) -> f64 {
    let (p1, p2) = kinetic_parts(p, y[0], y[1], sigma as f64, y[4], y[5]);
    y[3] * y[3] + p1 + p2
}

/// Derivative of `ρ₁` along the rescaled field.
pub fn rho1_derivative(p: &BlackHoleParams, x: &PhasePoint) -> f64 {
    let y = x.to_state();
    let v = field_state(p, &y, x.sigma);
    let [r, theta, _, rho, xt, xp] = y;
    let sg = x.sigma as f64;
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let (sn, cs) = theta.sin_cos();
    let s2 = sn * sn;
    let dth = 1.0 - alpha * cs * cs;
    let t = sg * delta_r(p, r) + 2.0 * oa * p.a * xp;
    let d_dth = 2.0 * alpha * cs * sn;
    let (ang_phi, d_ang_theta) = if xp == 0.0 {
        (0.0, 0.0)
    } else {
        let inv = 1.0 / (dth * s2);
        let d_inv = -2.0 * sn * cs * (alpha * s2 + dth) * inv * inv;
        (2.0 * oa * oa * xp * inv, oa * oa * xp * xp * d_inv)
    };
    let grad = [
        2.0 * t * sg * d_delta_r(p, r),
        d_dth * xt * xt + d_ang_theta,
        0.0,
        2.0 * rho,
        2.0 * dth * xt,
        ang_phi + 4.0 * oa * p.a * t,
    ];
    grad.iter().zip(v.iter()).map(|(g, f)| g * f).sum()
}
