//! Monte Carlo check of the central limit theorem for Chebyshev traces.
//!
//! ```text
//! cargo run --release --example clt_simulation -- 64 10000
//! SYMMWIG_THREADS=4 cargo run --release --example clt_simulation
//! ```

use symmwig::cli::fmt_num;
use symmwig::ensemble::{EntryModel, SymmetryClass};
use symmwig::montecarlo::{clt_report, run_simulation, CltThresholds, SimulationConfig};

fn main() -> symmwig::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(32);
    let samples: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4000);

    for class in SymmetryClass::ALL {
        let cfg = SimulationConfig::new(class, n, EntryModel::gaussian(1.0)?, 6, samples, 1);
        let r = run_simulation(&cfg)?;
        let rep = clt_report(&r, CltThresholds::default())?;
        println!("{class}, 2n = {}, {samples} samples, {:.1}s", 2 * n, r.wall_time_secs);
        println!("  m  var_est   se      theory  z       k3      k4");
        for d in &rep.degrees {
            let opt = |x: Option<f64>| x.map_or("n/a".to_string(), fmt_num);
            println!(
                "  {}  {:<8.3}  {:<6.3}  {:<6}  {:<7}  {:<7}  {}",
                d.degree,
                d.var_est,
                d.var_se,
                d.theory,
                opt(d.z.map(|z| (z * 100.0).round() / 100.0)),
                opt(d.k3.map(|z| (z * 1000.0).round() / 1000.0)),
                opt(d.k4.map(|z| (z * 1000.0).round() / 1000.0)),
            );
        }
        let worst = rep
            .cross
            .iter()
            .filter_map(|c| c.z.map(|z| (c.degrees, z)))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
        if let Some(((i, j), z)) = worst {
            println!("  largest cross-covariance z: Cov(T{i}, T{j}) z = {z:.2}");
        }
        println!("  all checks pass: {}\n", rep.pass);
    }
    Ok(())
}
