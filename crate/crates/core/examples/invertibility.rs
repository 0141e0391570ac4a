//! Smallest singular value of the pencil on growing circles in the upper
//! half-plane.
//!
//! ```text
//! cargo run --release --example invertibility -- 0.3 1.0
//! ```

use kerr_ads_qnf::geometry::BlackHoleParams;
use kerr_ads_qnf::qnf_solver::{invertibility_scan, GridSpec, ModeSpec, Problem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let a = args.first().copied().unwrap_or(0.3);
    let mass = args.get(1).copied().unwrap_or(1.0);
    let problem = Problem::new(BlackHoleParams::new(a, mass, 1.5)?, ModeSpec::new(0, None));
    let kappa = problem.kappa()?;
    let radii: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0].iter().map(|r| r * kappa).collect();
    let shells = invertibility_scan(&problem, &GridSpec::new(24, 8), &radii, 0.3, 9)?;
    println!("{:>10} {:>24} {:>12}", "|lambda|", "argmin lambda", "sigma_min");
    for s in shells {
        println!("{:>10.3} {:>11.4}{:+11.4}i {:>12.4e}", s.radius, s.lambda.re, s.lambda.im, s.sigma_min);
    }
    Ok(())
}
