//! Source/sink estimate near the radial set: the deficit
//! `2Δ'(r₊)ρ₁ − σρ̇₁` should be nonnegative up to `C ρ₁^{3/2}`.
//!
//! ```text
//! cargo run --release --example source_sink -- 0.3 1.0
//! ```

use kerr_ads_qnf::geometry::{find_horizons, BlackHoleParams};
use kerr_ads_qnf::phase_space::{rho1_derivative, sample_near_radial_set, source_sink_audit, symbol, AuditOptions};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let get = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let p = BlackHoleParams::new(get(0, 0.3), get(1, 1.0), 1.5)?;
    let h = find_horizons(&p)?;
    let opts = AuditOptions { n_samples: 500, ..AuditOptions::default() };

    let v = Default::default();
    let z = Complex64::new(0.0, 0.0);
    println!("{:>12} {:>12} {:>12}", "rho1", "sigma*rho1'", "ratio");
    for x in sample_near_radial_set(&p, &h, &opts).iter().take(8) {
        let r1 = symbol(&p, &v, x, z).rho1;
        let d = x.sigma as f64 * rho1_derivative(&p, x);
        println!("{r1:12.4e} {d:12.4e} {:12.6}", d / (r1 * h.d_delta_r_plus));
    }

    let rep = source_sink_audit(&p, &opts)?;
    println!(
        "{} samples: classified {:.4}, worst margin {:.3e}, fitted C {:.3e}, failures {}",
        rep.n_samples,
        rep.fraction_classified,
        rep.worst_margin,
        rep.fitted_c,
        rep.failures.len()
    );
    Ok(())
}
