//! Non-trapping audit: every characteristic point near the horizon should
//! reach the radial source or sink, or leave the extended region.
//!
//! ```text
//! cargo run --release --example flow_audit -- 0.5 1.0 500
//! ```

use kerr_ads_qnf::geometry::BlackHoleParams;
use kerr_ads_qnf::phase_space::{
    integrate_flow, nontrapping_audit, sample_characteristic, AuditOptions, Direction, FlowOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let get = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let p = BlackHoleParams::new(get(0, 0.5), get(1, 1.0), 1.5)?;
    let opts = AuditOptions { n_samples: get(2, 200.0) as usize, ..AuditOptions::default() };

    // one trajectory in detail
    let start = sample_characteristic(&p, 1, opts.flow.delta, 1, opts.theta_margin)?[0];
    for dir in [Direction::Forward, Direction::Backward] {
        let out = integrate_flow(&p, &start, dir, &FlowOptions::default())?;
        let end = out.end();
        println!("{dir:?}: {:?} at t = {:.3}, r = {:.6}, rho = {:.2e}", out.terminal, out.time, end.r, end.rho);
    }

    let t = std::time::Instant::now();
    let rep = nontrapping_audit(&p, &opts)?;
    println!(
        "{} samples in {:.1?}: classified {:.4}, worst margin {:.4}, failures {}, q-sign outliers {}",
        rep.n_samples,
        t.elapsed(),
        rep.fraction_classified,
        rep.worst_margin,
        rep.failures.len(),
        rep.q_sign_violations
    );
    for f in rep.failures.iter().take(5) {
        println!("  #{} {:?}: {}", f.index, f.direction, f.reason);
    }
    Ok(())
}
