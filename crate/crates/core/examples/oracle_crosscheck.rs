//! Exact trace covariances from two independent oracles, compared with the
//! pair-partition formula.
//!
//! ```text
//! cargo run --release --example oracle_crosscheck
//! ```

use symmwig::covariance::{config_oracle_matrix, v_n_exact, MomentOracle};
use symmwig::ensemble::{EntryModel, SymmetryClass};
use symmwig::Budget;

fn main() -> symmwig::Result<()> {
    let rademacher = EntryModel::rademacher(1.0)?;
    println!("configuration enumeration vs moment expansion, n = 2, Rademacher");
    for class in SymmetryClass::ALL {
        let cfg = config_oracle_matrix(class, 2, 4, &rademacher, Budget::default())?;
        let mut moments = MomentOracle::new(class, 2, rademacher.clone(), Budget::default())?;
        let mut worst: f64 = 0.0;
        for m in 1..=4 {
            for mu in 1..=4 {
                worst = worst.max((cfg[m - 1][mu - 1] - moments.cheb_cov(m, mu)?).abs());
            }
        }
        println!("  {class}: max |difference| = {worst:.2e}");
    }

    let gaussian = EntryModel::gaussian(1.0)?;
    println!("\nCov(Tr T_m, Tr T_m) against the formula, Gaussian");
    println!("class,n,m,oracle,formula");
    for class in SymmetryClass::ALL {
        for n in 2..=5 {
            let mut oracle = MomentOracle::new(class, n, gaussian.clone(), Budget::default())?;
            for m in 2..=4 {
                let formula = v_n_exact(class, n, m, &gaussian, Budget::default())?;
                println!("{class},{n},{m},{:.6},{:.6}", oracle.cheb_cov(m, m)?, formula);
            }
        }
    }
    Ok(())
}
