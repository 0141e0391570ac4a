//! Smallest singular value of `P(λ)` on circles high in the upper half-plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pencil::assemble_pencil;
use super::{GridSpec, Problem, QnfError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellSample {
    pub radius: f64,
    /// Point of the shell where `σ_min` is smallest.
    pub lambda: Complex64,
    pub sigma_min: f64,
}

/// For each radius `R`, the minimum of `σ_min(P(λ))` over `λ = R e^{iθ}`
/// with `θ` spread evenly over `[θ₀, π − θ₀]`. Growth in `R` means the
/// discrete resolvent stays bounded there.
pub fn invertibility_scan(
    problem: &Problem,
    grid: &GridSpec,
    radii: &[f64],
    theta0: f64,
    n_angles: usize,
) -> Result<Vec<ShellSample>, QnfError> {
    if !(theta0 > 0.0 && theta0 < std::f64::consts::FRAC_PI_2) || n_angles == 0 {
        return Err(QnfError::ConfigurationInvalid(format!("sector θ₀ = {theta0} with {n_angles} angles")));
    }
    let pencil = assemble_pencil(&problem.params, &problem.mode, grid, problem.delta, &problem.variant, None)?;
    let mut out = Vec::with_capacity(radii.len());
    for &radius in radii {
        let mut best = ShellSample { radius, lambda: Complex64::new(0.0, radius), sigma_min: f64::INFINITY };
        for k in 0..n_angles {
            let th = if n_angles == 1 {
                std::f64::consts::FRAC_PI_2
            } else {
                theta0 + (std::f64::consts::PI - 2.0 * theta0) * k as f64 / (n_angles - 1) as f64
            };
            let lambda = Complex64::from_polar(radius, th);
            let sv = pencil
                .eval(lambda)
                .singular_values()
                .map_err(|e| QnfError::Eigensolver(format!("SVD at λ = {lambda}: {e:?}")))?;
            let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
            if smin < best.sigma_min {
                best = ShellSample { radius, lambda, sigma_min: smin };
            }
        }
        out.push(best);
    }
    Ok(out)
}
