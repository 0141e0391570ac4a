//! Bessel-type boundary conditions at conformal infinity.
//!
//! A boundary operator is `T(λ)u = T⁻γ₋u + T⁺γ₊u` where `γ₋` picks the
//! coefficient of `s^{3/2−ν}` and `γ₊ = 2ν·` the coefficient of `s^{3/2+ν}`.
//! This module provides the traces, the Lopatinskiĭ audit against the
//! Kerr-AdS boundary symbol and the collocation rows used by the solver.

pub mod lopatinskii;
pub mod special;
pub mod traces;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lopatinskii::{
    lopatinskii_check, lopatinskii_check_symbol, BoundarySample, CustomBoundarySymbol, LopatinskiiOptions, LopatinskiiReport,
    PrincipalBoundarySymbol,
};
pub use special::{bessel_k, model_coefficients};
pub use traces::{ladder, trace_fit, TraceBasis, TraceFit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BesselError {
    #[error("lost accuracy in Bessel evaluation (cancellation ratio {cancellation:e})")]
    EvaluationLoss { cancellation: f64 },
    #[error("trace fit is ill-conditioned (condition number {condition:e})")]
    IllConditionedFit { condition: f64 },
    #[error("boundary condition {bc} is not supported at ν = {nu}")]
    UnsupportedNu { bc: String, nu: f64 },
    #[error("order μ = {mu} is inconsistent with {bc} at ν = {nu}")]
    UnsupportedOrder { bc: String, nu: f64, mu: f64 },
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BcKind {
    /// `γ₋u = 0`.
    Dirichlet,
    /// `γ₊u = 0`.
    Neumann,
    /// `γ₊u + βγ₋u = 0`.
    Robin { beta: Complex64 },
    /// `γ₊u + (β₀ + λβ₁)γ₋u = 0`.
    LambdaRobin { beta0: Complex64, beta1: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub kind: BcKind,
    /// Order `μ` of the boundary operator.
    pub mu: f64,
}

impl BoundaryCondition {
    pub fn dirichlet(nu: f64) -> Self {
        Self { kind: BcKind::Dirichlet, mu: 1.0 - nu }
    }

    pub fn neumann(nu: f64) -> Self {
        Self { kind: BcKind::Neumann, mu: 1.0 + nu }
    }

    pub fn robin(nu: f64, beta: impl Into<Complex64>) -> Self {
        Self { kind: BcKind::Robin { beta: beta.into() }, mu: 1.0 + nu }
    }

    pub fn lambda_robin(nu: f64, beta0: impl Into<Complex64>, beta1: impl Into<Complex64>) -> Self {
        Self { kind: BcKind::LambdaRobin { beta0: beta0.into(), beta1: beta1.into() }, mu: 1.0 + nu }
    }

    pub fn name(&self) -> String {
        match self.kind {
            BcKind::Dirichlet => "dirichlet".into(),
            BcKind::Neumann => "neumann".into(),
            BcKind::Robin { beta } => format!("robin({beta})"),
            BcKind::LambdaRobin { beta0, beta1 } => format!("lambda_robin({beta0},{beta1})"),
        }
    }

    /// Checks that `μ` matches the kind at this `ν`.
    pub fn validate(&self, nu: f64) -> Result<(), BesselError> {
        let expected = match self.kind {
            BcKind::Dirichlet => 1.0 - nu,
            _ => 1.0 + nu,
        };
        if (self.mu - expected).abs() > 1e-12 {
            return Err(BesselError::UnsupportedOrder { bc: self.name(), nu, mu: self.mu });
        }
        Ok(())
    }
}

/// How the solver closes the radial problem at `s = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryClosure {
    /// The field is written as `s^exponent·v` with `v` smooth; the PDE itself,
    /// evaluated at `s = 0`, is the boundary row.
    PdeLimit { exponent: f64 },
    /// The PDE row at `s = 0` degenerates and is replaced by explicit rows
    /// `lambda0 + λ·lambda1` acting on the radial nodal values at the
    /// boundary (same angular node).
    Rows { exponent: f64, lambda0: Vec<Complex64>, lambda1: Option<Vec<Complex64>> },
}

impl BoundaryClosure {
    pub fn exponent(&self) -> f64 {
        match self {
            BoundaryClosure::PdeLimit { exponent } | BoundaryClosure::Rows { exponent, .. } => *exponent,
        }
    }
}

fn is_half(nu: f64) -> bool {
    (nu - 0.5).abs() < 1e-12
}

/// Boundary closure for the radial collocation. `d1_row0` is the first row
/// of the radial differentiation matrix (the row at `s = 0`).
///
/// For `ν ≥ 1` no condition is imposed and the decaying branch `s^{3/2+ν}`
/// is factored out. For `0 < ν < 1`, Dirichlet factors out `s^{3/2+ν}` and
/// Neumann `s^{3/2−ν}`; at `ν = 1/2` both branches are smooth after
/// factoring out `s` and the condition becomes an explicit row. Robin-type
/// conditions mix the branches and need the `ν = 1/2` representation.
pub fn boundary_rows(nu: f64, bc: Option<&BoundaryCondition>, d1_row0: &[f64]) -> Result<BoundaryClosure, BesselError> {
    if !(nu > 0.0) {
        return Err(BesselError::Domain(format!("ν = {nu} must be positive")));
    }
    if nu >= 1.0 {
        return Ok(BoundaryClosure::PdeLimit { exponent: 1.5 + nu });
    }
    let bc = bc.ok_or_else(|| BesselError::Domain(format!("0 < ν = {nu} < 1 requires a boundary condition")))?;
    bc.validate(nu)?;
    let n = d1_row0.len();
    let unit: Vec<Complex64> = (0..n).map(|i| Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)).collect();
    let d1: Vec<Complex64> = d1_row0.iter().map(|&d| Complex64::new(d, 0.0)).collect();
    let combine = |beta: Complex64| -> Vec<Complex64> { d1.iter().zip(&unit).map(|(d, e)| d + beta * e).collect() };
    match bc.kind {
        BcKind::Dirichlet if is_half(nu) => Ok(BoundaryClosure::Rows { exponent: 1.0, lambda0: unit, lambda1: None }),
        BcKind::Dirichlet => Ok(BoundaryClosure::PdeLimit { exponent: 1.5 + nu }),
        BcKind::Neumann if is_half(nu) => {
            Ok(BoundaryClosure::Rows { exponent: 1.0, lambda0: d1, lambda1: None })
        }
        BcKind::Neumann => Ok(BoundaryClosure::PdeLimit { exponent: 1.5 - nu }),
        BcKind::Robin { beta } if is_half(nu) => {
            Ok(BoundaryClosure::Rows { exponent: 1.0, lambda0: combine(beta), lambda1: None })
        }
        BcKind::LambdaRobin { beta0, beta1 } if is_half(nu) => Ok(BoundaryClosure::Rows {
            exponent: 1.0,
            lambda0: combine(beta0),
            lambda1: Some(unit.iter().map(|e| e * beta1).collect()),
        }),
        _ => Err(BesselError::UnsupportedNu { bc: bc.name(), nu }),
    }
}
