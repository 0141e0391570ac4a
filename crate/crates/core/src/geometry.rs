//! Kerr-AdS background in units with AdS radius one.
//!
//! Everything here is pointwise algebra on the metric functions
//! `Δ_r = (r²+a²)(1+r²) − 2Mr`, `Δ_θ = 1 − a²cos²θ`, `ϱ² = r² + a²cos²θ`,
//! plus the root finder for the event horizon and the extension data that
//! makes the metric smooth across it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Derivative threshold below which a horizon counts as degenerate.
pub const EXTREMAL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no positive root of Δ_r (a = {a}, M = {mass})")]
    NoHorizon { a: f64, mass: f64 },
    #[error("extremal horizon at r = {r_plus} (∂Δ_r = {d_delta:e})")]
    Extremal { r_plus: f64, d_delta: f64 },
    #[error("coordinates at the axis: θ = {theta}")]
    PoleCoordinates { theta: f64 },
    #[error("δ = {delta} does not fit between the horizons (min Δ_r = {min_delta_r})")]
    DeltaTooLarge { delta: f64, min_delta_r: f64 },
}

/// Black hole parameters. The field mass enters through `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlackHoleParams {
    pub a: f64,
    pub mass: f64,
    pub nu: f64,
}

impl BlackHoleParams {
    pub fn new(a: f64, mass: f64, nu: f64) -> Result<Self, GeometryError> {
        let p = Self { a, mass, nu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.a.is_finite() && self.mass.is_finite() && self.nu.is_finite()) {
            return Err(GeometryError::InvalidParams("non-finite parameter".into()));
        }
        if self.a.abs() >= 1.0 {
            return Err(GeometryError::InvalidParams(format!("|a| = {} must be < 1", self.a.abs())));
        }
        if self.mass <= 0.0 {
            return Err(GeometryError::InvalidParams(format!("M = {} must be > 0", self.mass)));
        }
        if self.nu <= 0.0 {
            return Err(GeometryError::InvalidParams(format!("ν = {} must be > 0", self.nu)));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.a * self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonData {
    pub r_plus: f64,
    pub d_delta_r_plus: f64,
    pub kappa: f64,
    pub omega: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionClass {
    NoHorizon,
    Extremal,
    Admissible,
    AdmissibleHawkingReall,
}

impl RegionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionClass::NoHorizon => "no_horizon",
            RegionClass::Extremal => "extremal",
            RegionClass::Admissible => "admissible",
            RegionClass::AdmissibleHawkingReall => "admissible_hawking_reall",
        }
    }
}

pub fn delta_r(p: &BlackHoleParams, r: f64) -> f64 {
    (r * r + p.a * p.a) * (1.0 + r * r) - 2.0 * p.mass * r
}

pub fn d_delta_r(p: &BlackHoleParams, r: f64) -> f64 {
    4.0 * r * r * r + 2.0 * r * (1.0 + p.a * p.a) - 2.0 * p.mass
}

pub fn delta_theta(p: &BlackHoleParams, theta: f64) -> f64 {
    let c = theta.cos();
    1.0 - p.a * p.a * c * c
}

pub fn rho_sq(p: &BlackHoleParams, r: f64, theta: f64) -> f64 {
    let c = theta.cos();
    r * r + p.a * p.a * c * c
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Radius where `Δ_r` attains its minimum on `r > 0`. `Δ_r` is strictly
/// convex there, so this is the unique zero of `∂Δ_r`.
pub fn delta_r_minimizer(p: &BlackHoleParams) -> f64 {
    let hi = 2.0 + 2.0 * p.mass + p.a.abs();
    bisect(|r| d_delta_r(p, r), 0.0, hi)
}

/// Largest positive root of `Δ_r`.
///
/// `Δ_r` is convex on `r > 0` with `Δ_r(0) = a² ≥ 0`, so the candidate bracket
/// is `[r_min, 2 + 2M + |a|]` where `r_min` minimizes `Δ_r`. The root is
/// bisected and then polished with Newton steps.
pub fn find_horizons(p: &BlackHoleParams) -> Result<HorizonData, GeometryError> {
    p.validate()?;
    let r_min = delta_r_minimizer(p);
    let r_max = 2.0 + 2.0 * p.mass + p.a.abs();
    let d_min = delta_r(p, r_min);
    if d_min > 0.0 {
        return Err(GeometryError::NoHorizon { a: p.a, mass: p.mass });
    }
    let mut r = if d_min == 0.0 { r_min } else { bisect(|r| delta_r(p, r), r_min, r_max) };
    for _ in 0..3 {
        let d = d_delta_r(p, r);
        if d.abs() < EXTREMAL_TOL {
            break;
        }
        let step = delta_r(p, r) / d;
        if !step.is_finite() {
            break;
        }
        r -= step;
    }
    let d = d_delta_r(p, r);
    if d <= EXTREMAL_TOL {
        return Err(GeometryError::Extremal { r_plus: r, d_delta: d });
    }
    let alpha = p.alpha();
    let w = r * r + alpha;
    Ok(HorizonData {
        r_plus: r,
        d_delta_r_plus: d,
        kappa: d / (2.0 * (1.0 - alpha) * w),
        omega: p.a / w,
        alpha,
    })
}

pub fn surface_gravity(h: &HorizonData) -> f64 {
    h.d_delta_r_plus / (2.0 * (1.0 - h.alpha) * (h.r_plus * h.r_plus + h.alpha))
}

pub fn classify_region(p: &BlackHoleParams) -> Result<RegionClass, GeometryError> {
    p.validate()?;
    match find_horizons(p) {
        Ok(h) => {
            if h.r_plus * h.r_plus > p.a.abs() {
                Ok(RegionClass::AdmissibleHawkingReall)
            } else {
                Ok(RegionClass::Admissible)
            }
        }
        Err(GeometryError::NoHorizon { .. }) => Ok(RegionClass::NoHorizon),
        Err(GeometryError::Extremal { .. }) => Ok(RegionClass::Extremal),
        Err(e) => Err(e),
    }
}

/// One cell of a parameter scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanCell {
    pub a: f64,
    pub mass: f64,
    pub horizon: Option<HorizonData>,
    pub region: Result<RegionClass, GeometryError>,
}

impl ScanCell {
    pub fn region_tag(&self) -> &'static str {
        match &self.region {
            Ok(c) => c.as_str(),
            Err(_) => "invalid_params",
        }
    }
}

/// Classifies every `(a, M)` pair. Invalid parameters are kept as tagged cells.
pub fn region_scan(a_grid: &[f64], mass_grid: &[f64]) -> Vec<ScanCell> {
    let mut out = Vec::with_capacity(a_grid.len() * mass_grid.len());
    for &a in a_grid {
        for &mass in mass_grid {
            let p = BlackHoleParams { a, mass, nu: 1.0 };
            let region = classify_region(&p);
            let horizon = if region.is_ok() { find_horizons(&p).ok() } else { None };
            out.push(ScanCell { a, mass, horizon, region });
        }
    }
    out
}

pub const REGION_CSV_HEADER: &str = "a,M,r_plus,kappa,region";

pub fn region_scan_csv(cells: &[ScanCell]) -> String {
    let mut s = String::from(REGION_CSV_HEADER);
    s.push('\n');
    for c in cells {
        let (rp, k) = match &c.horizon {
            Some(h) => (format!("{:.15e}", h.r_plus), format!("{:.15e}", h.kappa)),
            None => (String::new(), String::new()),
        };
        s.push_str(&format!("{},{},{},{},{}\n", c.a, c.mass, rp, k, c.region_tag()));
    }
    s
}

/// Choice of the smooth function `f₊` in `t = t̃ + F_t(r)`. The family is
/// `f₊ = −scale·(1−α)/(1+r²)`; `scale = 1` is the default extension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionVariant {
    pub scale: f64,
}

impl Default for ExtensionVariant {
    fn default() -> Self {
        Self { scale: 1.0 }
    }
}

impl ExtensionVariant {
    pub fn id(&self) -> String {
        if self.scale == 1.0 {
            "default".to_string()
        } else {
            format!("scaled_{}", self.scale)
        }
    }

    pub fn f_plus(&self, p: &BlackHoleParams, r: f64) -> f64 {
        -self.scale * (1.0 - p.alpha()) / (1.0 + r * r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionData {
    pub f_plus: f64,
    /// `dF_t/dr`, only defined where `Δ_r > 0`.
    pub d_f_t: Option<f64>,
    /// `dF_φ/dr`, only defined where `Δ_r > 0`.
    pub d_f_phi: Option<f64>,
    /// Whether `dt` is timelike at this radius.
    pub dt_timelike: bool,
}

/// Left side of the timelike check for `dt`; timelike iff this is negative.
pub fn dt_timelike_margin(p: &BlackHoleParams, r: f64, f_plus: f64) -> f64 {
    let alpha = p.alpha();
    let w = r * r + p.a * p.a;
    delta_r(p, r) * f_plus * f_plus + 2.0 * (1.0 - alpha) * w * f_plus + (1.0 - alpha).powi(2) * p.a * p.a
}

pub fn extension_data(p: &BlackHoleParams, r: f64, variant: &ExtensionVariant) -> ExtensionData {
    let alpha = p.alpha();
    let f = variant.f_plus(p, r);
    let dr = delta_r(p, r);
    let (d_f_t, d_f_phi) = if dr > 0.0 {
        (
            Some((1.0 - alpha) * (r * r + p.a * p.a) / dr + f),
            Some((1.0 - alpha) * p.a / dr),
        )
    } else {
        (None, None)
    };
    ExtensionData { f_plus: f, d_f_t, d_f_phi, dt_timelike: dt_timelike_margin(p, r, f) < 0.0 }
}

/// Coefficients of `ϱ²·g⁻¹` (up to overall sign) in the extended coordinates
/// `(t, r, θ, φ)`. Off-diagonal entries are the symmetric matrix elements, so
/// the quadratic form is `tt ζ_t² + 2 tr ζ_t ζ_r + … + φφ ζ_φ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualMetric {
    pub tt: f64,
    pub tr: f64,
    pub tphi: f64,
    pub rr: f64,
    pub rphi: f64,
    pub thth: f64,
    pub phiphi: f64,
}

impl DualMetric {
    /// Full symmetric matrix in the order `(t, r, θ, φ)`.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        [
            [self.tt, self.tr, 0.0, self.tphi],
            [self.tr, self.rr, 0.0, self.rphi],
            [0.0, 0.0, self.thth, 0.0],
            [self.tphi, self.rphi, 0.0, self.phiphi],
        ]
    }

    /// Quadratic form `G(ζ, ζ)` (bilinear, not Hermitian).
    pub fn contract(&self, z: [Complex64; 4]) -> Complex64 {
        let m = self.matrix();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += z[i] * m[i][j] * z[j];
            }
        }
        acc
    }
}

pub fn dual_metric_coeffs(
    p: &BlackHoleParams,
    r: f64,
    theta: f64,
    variant: &ExtensionVariant,
) -> Result<DualMetric, GeometryError> {
    let s = theta.sin();
    if s.abs() < 1e-14 {
        return Err(GeometryError::PoleCoordinates { theta });
    }
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let a = p.a;
    let w = r * r + a * a;
    let dr = delta_r(p, r);
    let dth = delta_theta(p, theta);
    let f = variant.f_plus(p, r);
    Ok(DualMetric {
        tt: dr * f * f + 2.0 * oa * w * f + oa * oa * a * a * s * s / dth,
        tr: dr * f + oa * w,
        tphi: oa * a * f + oa * oa * a / dth,
        rr: dr,
        rphi: oa * a,
        thth: dth,
        phiphi: oa * oa / (dth * s * s),
    })
}

/// Radius inside the horizon where `Δ_r = −δ`, i.e. the artificial boundary.
pub fn inner_radius(p: &BlackHoleParams, h: &HorizonData, delta: f64) -> Result<f64, GeometryError> {
    if !(delta > 0.0) {
        return Err(GeometryError::InvalidParams(format!("δ = {delta} must be > 0")));
    }
    let r_min = delta_r_minimizer(p);
    let d_min = delta_r(p, r_min);
    if d_min >= -delta {
        return Err(GeometryError::DeltaTooLarge { delta, min_delta_r: d_min });
    }
    let mut r = bisect(|r| delta_r(p, r) + delta, r_min, h.r_plus);
    for _ in 0..2 {
        r -= (delta_r(p, r) + delta) / d_delta_r(p, r);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwarzschild_ads_root() {
        // r³ + r − 2M = 0 at M = 1 has r = 1.
        let p = BlackHoleParams::new(0.0, 1.0, 0.5).unwrap();
        let h = find_horizons(&p).unwrap();
        assert!((h.r_plus - 1.0).abs() < 1e-13);
        assert!((h.kappa - 2.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_spin() {
        let p = BlackHoleParams { a: 1.0, mass: 1.0, nu: 1.0 };
        assert!(matches!(find_horizons(&p), Err(GeometryError::InvalidParams(_))));
    }

    #[test]
    fn small_mass_has_no_horizon_only_with_spin() {
        let p = BlackHoleParams::new(0.5, 0.01, 1.0).unwrap();
        assert_eq!(classify_region(&p).unwrap(), RegionClass::NoHorizon);
        let p = BlackHoleParams::new(0.0, 0.01, 1.0).unwrap();
        assert!(matches!(classify_region(&p).unwrap(), RegionClass::Admissible | RegionClass::AdmissibleHawkingReall));
    }

    #[test]
    fn pole_rejected() {
        let p = BlackHoleParams::new(0.3, 1.0, 1.0).unwrap();
        assert!(dual_metric_coeffs(&p, 1.0, 0.0, &ExtensionVariant::default()).is_err());
    }

    #[test]
    fn inner_radius_solves() {
        let p = BlackHoleParams::new(0.3, 1.0, 1.0).unwrap();
        let h = find_horizons(&p).unwrap();
        let r = inner_radius(&p, &h, 0.1).unwrap();
        assert!(r < h.r_plus);
        assert!((delta_r(&p, r) + 0.1).abs() < 1e-13);
    }
}
