//! Frobenius shooting at a = 0: refine a QNF for each ℓ by continuation.
//!
//! ```text
//! cargo run --example oracle -- 1.0 1.5 2 2.8 -2.67
//! cargo run --example oracle -- 1.0 0.5 0 2.0 -1.5 neumann
//! ```

use kerr_ads_qnf::bessel_bc::BoundaryCondition;
use kerr_ads_qnf::geometry::BlackHoleParams;
use kerr_ads_qnf::qnf_solver::oracle::{continue_in_ell, OracleOptions};
use kerr_ads_qnf::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let args: Vec<f64> = raw.iter().take(5).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let [mass, nu, ell, re, im] = args[..] else {
        eprintln!("usage: oracle M nu ell re im [dirichlet|neumann|robin:β]");
        std::process::exit(2);
    };
    let p = BlackHoleParams::new(0.0, mass, nu)?;
    let bc = match raw.get(5).map(String::as_str) {
        None => None,
        Some("dirichlet") => Some(BoundaryCondition::dirichlet(nu)),
        Some("neumann") => Some(BoundaryCondition::neumann(nu)),
        Some(s) => match s.strip_prefix("robin:") {
            Some(b) => Some(BoundaryCondition::robin(nu, b.parse::<f64>()?)),
            None => return Err(format!("unknown boundary condition {s}").into()),
        },
    };
    let opts = OracleOptions::default();
    let target = ell * (ell + 1.0);
    let steps = (4.0 * target).ceil() as usize;
    let res = continue_in_ell(&p, 0.0, target, steps, bc, C64::new(re, im), &opts)?;
    println!("ℓ = {ell}: λ = {:.12} {:+.12}i", res.lambda.re, res.lambda.im);
    println!("  determinant {:.1e}, certificate {:.1e} (order {})", res.determinant, res.certificate, res.order);
    println!("{}", serde_json::to_string(&res)?);
    Ok(())
}
