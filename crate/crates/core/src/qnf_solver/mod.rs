//! Quasinormal frequencies as eigenvalues of the collocated pencil.

pub mod chebyshev;
pub mod filter;
pub mod grid;
pub mod invariance;
pub mod invertibility;
pub mod oracle;
pub mod pencil;
pub mod qep;

use rayon::prelude::*;
use thiserror::Error;

use crate::bessel_bc::BesselError;
use crate::geometry::{find_horizons, BlackHoleParams, ExtensionVariant, GeometryError, RegionClass};

pub use filter::convergence_filter;
pub use grid::{GridSpec, Parity};
pub use invertibility::{invertibility_scan, ShellSample};
pub use pencil::{assemble_at, assemble_pencil, ModeSpec, QnfPencil};
pub use qep::{solve_qep, QepOptions, QnfResult, Window};

#[derive(Debug, Error)]
pub enum QnfError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Boundary(#[from] BesselError),
    #[error("parameters are not admissible: {0:?}")]
    InvalidRegion(RegionClass),
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("P(σ) stayed singular over {attempts} shifts (min pivot ratio {min_pivot_ratio:e})")]
    LinearizationSingular { attempts: usize, min_pivot_ratio: f64 },
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("configuration invalid: {0}")]
    ConfigurationInvalid(String),
    #[error("oracle did not converge: {0}")]
    NoConvergence(String),
    #[error("series radius insufficient: {0}")]
    SeriesRadius(String),
}

/// Everything that fixes one discretized problem apart from the resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    pub params: BlackHoleParams,
    pub mode: ModeSpec,
    pub delta: f64,
    pub variant: ExtensionVariant,
}

impl Problem {
    pub fn new(params: BlackHoleParams, mode: ModeSpec) -> Self {
        Self { params, mode, delta: 0.1, variant: ExtensionVariant::default() }
    }

    pub fn kappa(&self) -> Result<f64, QnfError> {
        Ok(find_horizons(&self.params)?.kappa)
    }

    pub fn default_window(&self) -> Result<Window, QnfError> {
        Ok(Window::default_for(self.kappa()?, self.mode.k_threshold))
    }
}

/// Solves both parity sectors at one resolution.
pub fn solve_at(problem: &Problem, grid: &GridSpec, window: &Window, opts: &QepOptions) -> Result<Vec<QnfResult>, QnfError> {
    let parts: Vec<Result<Vec<QnfResult>, QnfError>> = [Parity::Even, Parity::Odd]
        .par_iter()
        .map(|&par| {
            let pencil = assemble_pencil(&problem.params, &problem.mode, grid, problem.delta, &problem.variant, Some(par))?;
            solve_qep(&pencil, window, opts)
        })
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Solves at two resolutions and keeps the pairs that agree.
pub fn solve_converged(
    problem: &Problem,
    coarse: &GridSpec,
    fine: &GridSpec,
    window: &Window,
    opts: &QepOptions,
) -> Result<Vec<QnfResult>, QnfError> {
    let a = solve_at(problem, coarse, window, opts)?;
    let b = solve_at(problem, fine, window, opts)?;
    Ok(convergence_filter(&a, &b, problem.kappa()?, problem.mode.k_threshold))
}
