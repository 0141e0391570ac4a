//! Converged quasinormal frequencies of one azimuthal mode.
//!
//! ```text
//! cargo run --release --example qnf_spectrum -- 0.0 1.0 1.5 0
//! cargo run --release --example qnf_spectrum -- 0.0 1.0 0.5 0 robin:0.01
//! ```

use kerr_ads_qnf::bessel_bc::BoundaryCondition;
use kerr_ads_qnf::geometry::BlackHoleParams;
use kerr_ads_qnf::qnf_solver::{solve_converged, GridSpec, ModeSpec, Problem, QepOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let args: Vec<f64> = raw.iter().take(4).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let get = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let params = BlackHoleParams::new(get(0, 0.0), get(1, 1.0), get(2, 1.5))?;
    let bc = match raw.get(4).map(String::as_str) {
        None => None,
        Some("dirichlet") => Some(BoundaryCondition::dirichlet(params.nu)),
        Some("neumann") => Some(BoundaryCondition::neumann(params.nu)),
        Some(s) => match s.strip_prefix("robin:") {
            Some(b) => Some(BoundaryCondition::robin(params.nu, b.parse::<f64>()?)),
            None => return Err(format!("unknown boundary condition {s}").into()),
        },
    };
    let mode = ModeSpec::new(get(3, 0.0) as i32, bc);
    let problem = Problem::new(params, mode);
    let window = problem.default_window()?;
    let t = std::time::Instant::now();
    let qnfs = solve_converged(&problem, &GridSpec::new(40, 12), &GridSpec::new(60, 18), &window, &QepOptions::default())?;
    println!("{} converged in {:.1?}", qnfs.len(), t.elapsed());
    for q in &qnfs {
        println!("{:>+.10} {:>+.10}i  residual {:.1e}  {:?}", q.lambda.re, q.lambda.im, q.residual, q.parity);
    }
    Ok(())
}
