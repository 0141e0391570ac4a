//! Horizon data and region tag for a few Kerr-AdS backgrounds.
//!
//! ```text
//! cargo run --example horizons -- 0.3 1.0
//! ```

use kerr_ads_qnf::geometry::{classify_region, find_horizons, inner_radius, BlackHoleParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let cases: Vec<(f64, f64)> = match args.as_slice() {
        [a, m] => vec![(*a, *m)],
        _ => vec![(0.0, 1.0), (0.3, 1.0), (0.7, 2.0), (0.5, 0.6), (0.9, 0.05)],
    };
    println!("{:>5} {:>6} {:>12} {:>12} {:>12} {:>12}  region", "a", "M", "r_plus", "kappa", "Omega", "r_inner");
    for (a, m) in cases {
        let p = BlackHoleParams::new(a, m, 1.5)?;
        let region = classify_region(&p)?;
        match find_horizons(&p) {
            Ok(h) => {
                let r_in = inner_radius(&p, &h, 0.1).map(|r| format!("{r:12.8}")).unwrap_or_else(|_| format!("{:>12}", "-"));
                println!(
                    "{a:5.2} {m:6.3} {:12.8} {:12.8} {:12.8} {r_in}  {}",
                    h.r_plus,
                    h.kappa,
                    h.omega,
                    region.as_str()
                );
            }
            Err(_) => println!("{a:5.2} {m:6.3} {:>12} {:>12} {:>12} {:>12}  {}", "-", "-", "-", "-", region.as_str()),
        }
    }
    Ok(())
}
