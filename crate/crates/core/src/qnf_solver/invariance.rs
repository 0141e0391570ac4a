//! Independence of the spectrum from the artificial boundary and from the
//! extension across the horizon.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{solve_converged, GridSpec, Problem, QepOptions, QnfError, QnfResult, Window};
use crate::geometry::{extension_data, find_horizons, inner_radius, ExtensionVariant};

/// One way of setting up the extended problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub delta: f64,
    pub variant: ExtensionVariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Displacement {
    pub reference: Complex64,
    pub other: Complex64,
    pub delta: f64,
    pub fplus_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub max_displacement: f64,
    /// Largest `|Δλ|/(1+|λ|)`.
    pub max_relative: f64,
    pub n_reference: usize,
    pub pairs: Vec<Displacement>,
    /// Reference QNFs with no counterpart within the matching radius.
    pub unmatched: Vec<Complex64>,
}

impl InvarianceReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.unmatched.is_empty() && self.max_relative < tol
    }
}

/// Rejects variants for which `dt` fails to be timelike somewhere on
/// `[r_inner, 10]`.
pub fn check_timelike(problem: &Problem, cfg: &Configuration) -> Result<(), QnfError> {
    let h = find_horizons(&problem.params)?;
    let r_in = inner_radius(&problem.params, &h, cfg.delta)?;
    let n = 400;
    for i in 0..=n {
        let r = r_in + (10.0 - r_in) * i as f64 / n as f64;
        if !extension_data(&problem.params, r, &cfg.variant).dt_timelike {
            return Err(QnfError::ConfigurationInvalid(format!(
                "f₊ variant {} is not timelike at r = {r:.6}",
                cfg.variant.id()
            )));
        }
    }
    Ok(())
}

/// Matching radius for pairing QNFs across configurations.
const MATCH_RADIUS: f64 = 1e-3;

/// Solves every configuration and reports how far each converged QNF of the
/// first one moves in the others.
pub fn invariance_test(
    problem: &Problem,
    coarse: &GridSpec,
    fine: &GridSpec,
    configs: &[Configuration],
    window: &Window,
    opts: &QepOptions,
) -> Result<InvarianceReport, QnfError> {
    if configs.is_empty() {
        return Err(QnfError::ConfigurationInvalid("no configurations given".into()));
    }
    for c in configs {
        check_timelike(problem, c)?;
    }
    let spectra: Vec<Result<Vec<QnfResult>, QnfError>> = configs
        .par_iter()
        .map(|c| {
            let pb = Problem { delta: c.delta, variant: c.variant, ..*problem };
            solve_converged(&pb, coarse, fine, window, opts)
        })
        .collect();
    let spectra = spectra.into_iter().collect::<Result<Vec<_>, _>>()?;
    let reference: Vec<Complex64> = spectra[0].iter().filter(|q| q.halfplane_ok).map(|q| q.lambda).collect();
    let mut rep = InvarianceReport {
        max_displacement: 0.0,
        max_relative: 0.0,
        n_reference: reference.len(),
        pairs: Vec::new(),
        unmatched: Vec::new(),
    };
    for (cfg, spec) in configs.iter().zip(&spectra).skip(1) {
        for &lam in &reference {
            let best = spec.iter().map(|q| q.lambda).min_by(|x, y| (x - lam).norm().total_cmp(&(y - lam).norm()));
            match best {
                Some(o) if (o - lam).norm() < MATCH_RADIUS * (1.0 + lam.norm()) => {
                    let d = (o - lam).norm();
                    rep.max_displacement = rep.max_displacement.max(d);
                    rep.max_relative = rep.max_relative.max(d / (1.0 + lam.norm()));
                    rep.pairs.push(Displacement { reference: lam, other: o, delta: cfg.delta, fplus_id: cfg.variant.id() });
                }
                _ => rep.unmatched.push(lam),
            }
        }
    }
    Ok(rep)
}
