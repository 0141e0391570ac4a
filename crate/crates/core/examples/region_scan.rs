//! Scans the (a, M) plane and prints the extremal mass per spin column.
//!
//! ```text
//! cargo run --release --example region_scan -- 200 > region.csv
//! ```
//! Pass `--csv` as the second argument to dump the full table instead.

use kerr_ads_qnf::geometry::{region_scan, region_scan_csv, RegionClass};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(50);
    let a_grid: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
    let m_grid: Vec<f64> = (1..=n).map(|j| 2.0 * j as f64 / n as f64).collect();
    let t = std::time::Instant::now();
    let cells = region_scan(&a_grid, &m_grid);
    if args.get(1).map(String::as_str) == Some("--csv") {
        print!("{}", region_scan_csv(&cells));
        return;
    }
    eprintln!("{} cells in {:.2?}", cells.len(), t.elapsed());
    println!("a,first_admissible_M,first_hawking_reall_M");
    for col in cells.chunks(n) {
        let first = |want: &dyn Fn(&RegionClass) -> bool| {
            col.iter()
                .find(|c| c.region.as_ref().map(|r| want(r)).unwrap_or(false))
                .map(|c| c.mass.to_string())
                .unwrap_or_default()
        };
        let adm = first(&|r| matches!(r, RegionClass::Admissible | RegionClass::AdmissibleHawkingReall));
        let hr = first(&|r| *r == RegionClass::AdmissibleHawkingReall);
        println!("{},{adm},{hr}", col[0].a);
    }
}
