//! Lopatinskii margins of the standard boundary conditions at one `ν`.
//!
//! ```text
//! cargo run --release --example lopatinskii -- 0.5
//! ```

use kerr_ads_qnf::bessel_bc::{lopatinskii_check, BoundaryCondition, LopatinskiiOptions};
use kerr_ads_qnf::geometry::BlackHoleParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nu: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0.5);
    let p = BlackHoleParams::new(0.3, 1.0, nu)?;
    let opts = LopatinskiiOptions { n_samples: 2000, ..LopatinskiiOptions::default() };
    let mut bcs = vec![BoundaryCondition::dirichlet(nu), BoundaryCondition::neumann(nu)];
    if nu > 0.0 && nu <= 0.5 {
        bcs.push(BoundaryCondition::lambda_robin(nu, 0.0, 1.0));
    }
    for bc in &bcs {
        let rep = lopatinskii_check(&p, bc, &opts)?;
        print!("{:<28} min margin {:.4e}  {}", rep.bc, rep.min_margin, if rep.passed { "pass" } else { "FAIL" });
        if let Some(w) = &rep.witness {
            print!("  at θ={:.3} η=({:.3},{:.3}) λ={:.3}", w.sample.theta, w.sample.eta_theta, w.sample.eta_phi, w.sample.lambda);
        }
        println!();
    }
    Ok(())
}
