//! Sampling audits of the characteristic set and of the flow near the
//! radial sets `L±`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::flow::{integrate_flow, Direction, FlowOptions, Terminal};
use super::{principal, q_hat, rho1_derivative, PhaseError, PhasePoint};
use crate::geometry::{
    d_delta_r, delta_r, find_horizons, inner_radius, BlackHoleParams, ExtensionVariant, HorizonData,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    pub n_samples: usize,
    pub seed: u64,
    pub flow: FlowOptions,
    /// Upper bound on `ρ₁` for source/sink samples.
    pub neighborhood: f64,
    /// Polar cap excluded from base-point samples.
    pub theta_margin: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self { n_samples: 500, seed: 0, flow: FlowOptions::default(), neighborhood: 1e-4, theta_margin: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditFailure {
    pub index: usize,
    pub start: PhasePoint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NontrappingReport {
    pub n_samples: usize,
    pub fraction_classified: f64,
    /// Smallest unused fraction of `t_max` over all classified flows.
    pub worst_margin: f64,
    pub failures: Vec<AuditFailure>,
    /// Samples where `q̂` at `z = i` disagrees in sign with the majority of
    /// its `σ` component; reported, not asserted.
    pub q_sign_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSinkReport {
    pub n_samples: usize,
    pub fraction_classified: f64,
    pub worst_margin: f64,
    pub fitted_c: f64,
    pub failures: Vec<AuditFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicReport {
    pub n_samples: usize,
    /// Samples with `Δ_r > a²`.
    pub n_coarse: usize,
    /// Samples with `a²Δ_θ sin²θ < Δ_r ≤ a²`.
    pub n_sharp_only: usize,
    /// `min σ₂/|ξ|²` over the coarse region.
    pub min_normalized_coarse: f64,
    /// `min σ₂/|ξ|²` over the sharp-only band.
    pub min_normalized_sharp: f64,
    pub violations: usize,
}

fn theta_sample(rng: &mut ChaCha8Rng, margin: f64) -> f64 {
    rng.gen_range(margin..std::f64::consts::PI - margin)
}

/// Checks ellipticity of `σ₂` away from the characteristic bound.
pub fn characteristic_bound_check(p: &BlackHoleParams, n: usize, seed: u64) -> Result<CharacteristicReport, PhaseError> {
    let h = find_horizons(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a2 = p.a * p.a;
    let mut rep = CharacteristicReport {
        n_samples: n,
        n_coarse: 0,
        n_sharp_only: 0,
        min_normalized_coarse: f64::INFINITY,
        min_normalized_sharp: f64::INFINITY,
        violations: 0,
    };
    for _ in 0..n {
        let r = rng.gen_range(h.r_plus..10.0);
        let theta = theta_sample(&mut rng, 0.05);
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        let xi = [v[0] / nrm, v[1] / nrm, v[2] / nrm];
        let val = principal(p, r, theta, xi);
        let dr = delta_r(p, r);
        let c = theta.cos();
        let sharp = a2 * (1.0 - a2 * c * c) * theta.sin().powi(2);
        if dr > a2 {
            rep.n_coarse += 1;
            rep.min_normalized_coarse = rep.min_normalized_coarse.min(val);
            if val <= 0.0 {
                rep.violations += 1;
            }
        } else if dr > sharp {
            rep.n_sharp_only += 1;
            rep.min_normalized_sharp = rep.min_normalized_sharp.min(val);
        }
    }
    Ok(rep)
}

/// Points of the characteristic set at fibre infinity with
/// `−δ < Δ_r ≤ a²`, sampled by solving `σ₂ = 0` for `ξ̂_θ`.
pub fn sample_characteristic(p: &BlackHoleParams, n: usize, delta: f64, seed: u64, theta_margin: f64) -> Result<Vec<PhasePoint>, PhaseError> {
    let h = find_horizons(p)?;
    let r_in = inner_radius(p, &h, delta)?;
    let alpha = p.alpha();
    let oa = 1.0 - alpha;
    let a = p.a;
    // Δ_r(r_c) = a² bounds the characteristic set from outside
    let r_c = if a == 0.0 {
        h.r_plus
    } else {
        let (mut lo, mut hi) = (h.r_plus, 20.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if delta_r(p, mid) > alpha { hi = mid } else { lo = mid }
        }
        lo
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut guard = 0usize;
    while out.len() < n {
        guard += 1;
        if guard > 1000 * n.max(1) {
            return Err(PhaseError::ChartViolation("characteristic set too thin to sample".into()));
        }
        let r = rng.gen_range(r_in..r_c);
        if delta_r(p, r) <= -delta {
            continue;
        }
        let theta = theta_sample(&mut rng, theta_margin);
        let sigma: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let sg = sigma as f64;
        let s = theta.sin();
        let c = theta.cos();
        let dth = 1.0 - alpha * c * c;
        let dr = delta_r(p, r);
        let room = a * a * dth * s * s - dr;
        if room <= 0.0 {
            continue;
        }
        let centre = -sg * a * dth * s * s / oa;
        let half = dth * s * room.sqrt() / oa;
        let xp = centre + half * rng.gen_range(-1.0..1.0);
        let rest = dr + 2.0 * a * oa * sg * xp + oa * oa * xp * xp / (dth * s * s);
        let xt2 = (-rest / dth).max(0.0);
        let xt = if rng.gen_bool(0.5) { xt2.sqrt() } else { -xt2.sqrt() };
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        out.push(PhasePoint::new(r, theta, phi, 0.0, xt, xp, sigma)?);
    }
    Ok(out)
}

fn classified(t: Terminal) -> bool {
    !matches!(t, Terminal::MaxTime)
}

/// Flows every characteristic sample both ways; a sample is classified when
/// both directions end at `L±` or at the artificial boundary.
pub fn nontrapping_audit(p: &BlackHoleParams, opts: &AuditOptions) -> Result<NontrappingReport, PhaseError> {
    let pts = sample_characteristic(p, opts.n_samples, opts.flow.delta, opts.seed, opts.theta_margin)?;
    let fopts = FlowOptions { keep_every: usize::MAX, ..opts.flow };
    let results: Vec<(Vec<AuditFailure>, f64)> = pts
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut fails = Vec::new();
            let mut margin = f64::INFINITY;
            for dir in [Direction::Forward, Direction::Backward] {
                match integrate_flow(p, x, dir, &fopts) {
                    Ok(o) if classified(o.terminal) => margin = margin.min(1.0 - o.time / fopts.t_max),
                    Ok(o) => fails.push(AuditFailure {
                        index: i,
                        start: *x,
                        direction: Some(dir),
                        reason: format!("{:?} at t = {}", o.terminal, o.time),
                    }),
                    Err(e) => fails.push(AuditFailure { index: i, start: *x, direction: Some(dir), reason: e.to_string() }),
                }
            }
            (fails, margin)
        })
        .collect();
    let n = pts.len();
    let n_ok = results.iter().filter(|(f, _)| f.is_empty()).count();
    let worst = results.iter().map(|(_, m)| *m).fold(f64::INFINITY, f64::min);
    let variant = ExtensionVariant::default();
    let z = Complex64::new(0.0, 1.0);
    let mut q_viol = 0;
    for sg in [1i8, -1] {
        let qs: Vec<f64> = pts.iter().filter(|x| x.sigma == sg).map(|x| q_hat(p, &variant, x, z)).collect();
        let pos = qs.iter().filter(|q| **q > 0.0).count();
        let neg = qs.iter().filter(|q| **q < 0.0).count();
        q_viol += pos.min(neg);
    }
    Ok(NontrappingReport {
        n_samples: n,
        fraction_classified: if n == 0 { 1.0 } else { n_ok as f64 / n as f64 },
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        failures: results.into_iter().flat_map(|(f, _)| f).collect(),
        q_sign_violations: q_viol,
    })
}

/// Points near `L±` with `0 < ρ₁ < neighborhood`.
pub fn sample_near_radial_set(p: &BlackHoleParams, h: &HorizonData, opts: &AuditOptions) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::with_capacity(opts.n_samples);
    let ddr = d_delta_r(p, h.r_plus);
    while out.len() < opts.n_samples {
        let scale = 10f64.powf(rng.gen_range(-5.0..-1.5));
        let g: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let nrm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1.0 || nrm < 1e-3 {
            continue;
        }
        let d = g.map(|x| scale * x / nrm);
        let sigma: i8 = if out.len() % 2 == 0 { 1 } else { -1 };
        let theta = theta_sample(&mut rng, opts.theta_margin);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = h.r_plus + d[0] / ddr;
        let Ok(x) = PhasePoint::new(r, theta, phi, d[1].abs(), d[2], d[3], sigma) else { continue };
        let rho1 = super::rho1_state(p, &x.to_state(), sigma);
        if rho1 > 0.0 && rho1 < opts.neighborhood {
            out.push(x);
        }
    }
    out
}

/// Safety factor on the fitted remainder constant. The remainder is cubic and
/// homogeneous, so its ratio to `ρ₁^{3/2}` depends only on the direction; a
/// maximum over a tenth of the directions undershoots the supremum.
pub const SOURCE_SINK_C_FACTOR: f64 = 2.0;

/// Checks `σ·ρH(ρ₁) ≥ 2∂Δ_r(r₊)ρ₁ − Cρ₁^{3/2}` near `L±`, with `C` fitted on
/// the samples with the largest `ρ₁`.
pub fn source_sink_audit(p: &BlackHoleParams, opts: &AuditOptions) -> Result<SourceSinkReport, PhaseError> {
    let h = find_horizons(p)?;
    let pts = sample_near_radial_set(p, &h, opts);
    let ddr = h.d_delta_r_plus;
    let data: Vec<(f64, f64)> = pts
        .iter()
        .map(|x| {
            let rho1 = super::rho1_state(p, &x.to_state(), x.sigma);
            let lhs = x.sigma as f64 * rho1_derivative(p, x);
            (rho1, 2.0 * ddr * rho1 - lhs)
        })
        .collect();
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&i, &j| data[j].0.partial_cmp(&data[i].0).unwrap());
    let top = (data.len() / 10).max(1);
    let fitted_c = order[..top.min(order.len())]
        .iter()
        .map(|&i| data[i].1 / data[i].0.powf(1.5))
        .fold(0.0, f64::max)
        * SOURCE_SINK_C_FACTOR;
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for (i, (rho1, deficit)) in data.iter().enumerate() {
        let margin = fitted_c * rho1.powf(1.5) - deficit;
        let rel = margin / rho1;
        worst = worst.min(rel);
        if margin < 0.0 {
            failures.push(AuditFailure {
                index: i,
                start: pts[i],
                direction: None,
                reason: format!("margin {margin:e} at ρ₁ = {rho1:e}"),
            });
        }
    }
    let n = pts.len();
    Ok(SourceSinkReport {
        n_samples: n,
        fraction_classified: if n == 0 { 1.0 } else { (n - failures.len()) as f64 / n as f64 },
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        fitted_c,
        failures,
    })
}
