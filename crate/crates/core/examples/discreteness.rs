//! Converged QNF counts in the default window along a resolution ladder.
//! Each rung is paired with the next one for the convergence filter.
//!
//! ```text
//! cargo run --release --example discreteness -- 0.3 1.0 0.5 0
//! ```

use kerr_ads_qnf::bessel_bc::BoundaryCondition;
use kerr_ads_qnf::geometry::BlackHoleParams;
use kerr_ads_qnf::qnf_solver::{convergence_filter, solve_at, GridSpec, ModeSpec, Problem, QepOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let get = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let params = BlackHoleParams::new(get(0, 0.3), get(1, 1.0), get(2, 0.5))?;
    let bc = (params.nu < 1.0).then(|| BoundaryCondition::dirichlet(params.nu));
    let problem = Problem::new(params, ModeSpec::new(get(3, 0.0) as i32, bc));
    let window = problem.default_window()?;
    let kappa = problem.kappa()?;
    let ladder = [(40, 12), (60, 18), (80, 24), (100, 30)];
    let mut spectra = Vec::new();
    for (nr, nt) in ladder {
        let t = std::time::Instant::now();
        spectra.push(solve_at(&problem, &GridSpec::new(nr, nt), &window, &QepOptions::default())?);
        println!("{nr}x{nt}: {} candidates in {:.1?}", spectra.last().map_or(0, Vec::len), t.elapsed());
    }
    for i in 0..ladder.len() - 1 {
        let conv = convergence_filter(&spectra[i], &spectra[i + 1], kappa, problem.mode.k_threshold);
        let (nr, nt) = ladder[i];
        println!("{nr}x{nt}: {} converged", conv.len());
        for q in &conv {
            println!("  {:+.8} {:+.8}i", q.lambda.re, q.lambda.im);
        }
    }
    Ok(())
}
