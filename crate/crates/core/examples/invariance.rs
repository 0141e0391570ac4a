//! Spectrum displacement under changes of the artificial boundary and of
//! the extension across the horizon.
//!
//! ```text
//! cargo run --release --example invariance -- 0.3 1.0 1.5 0
//! ```

use kerr_ads_qnf::geometry::{BlackHoleParams, ExtensionVariant};
use kerr_ads_qnf::qnf_solver::invariance::{invariance_test, Configuration};
use kerr_ads_qnf::qnf_solver::{GridSpec, ModeSpec, Problem, QepOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let get = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let params = BlackHoleParams::new(get(0, 0.3), get(1, 1.0), get(2, 1.5))?;
    let problem = Problem::new(params, ModeSpec::new(get(3, 0.0) as i32, None));
    let configs = [
        Configuration { delta: 0.1, variant: ExtensionVariant::default() },
        Configuration { delta: 0.05, variant: ExtensionVariant::default() },
        Configuration { delta: 0.1, variant: ExtensionVariant { scale: 1.2 } },
    ];
    let t = std::time::Instant::now();
    let rep = invariance_test(
        &problem,
        &GridSpec::new(40, 12),
        &GridSpec::new(60, 18),
        &configs,
        &problem.default_window()?,
        &QepOptions::default(),
    )?;
    println!("{} reference QNFs, {} pairs, {} unmatched ({:.1?})", rep.n_reference, rep.pairs.len(), rep.unmatched.len(), t.elapsed());
    println!("max |Δλ| = {:.2e}, max |Δλ|/(1+|λ|) = {:.2e}", rep.max_displacement, rep.max_relative);
    for u in &rep.unmatched {
        println!("unmatched {u:.8}");
    }
    Ok(())
}
