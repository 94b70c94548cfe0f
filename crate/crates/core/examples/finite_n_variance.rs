//! Finite-n variances of Chebyshev traces against their limits.
//!
//! ```text
//! cargo run --release --example finite_n_variance -- 12 [equality|coarsening]
//! ```

use std::time::Instant;

use symmwig::covariance::{v_asymptotic, v_n_breakdown, GoodRule};
use symmwig::ensemble::{EntryModel, SymmetryClass};
use symmwig::Budget;

fn main() -> symmwig::Result<()> {
    let n_max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let rule: GoodRule = match std::env::args().nth(2) {
        Some(s) => s.parse()?,
        None => GoodRule::Equality,
    };
    let model = EntryModel::gaussian(1.0)?;
    println!("class,n,m,v_n,limit,flag,seconds");
    for class in SymmetryClass::ALL {
        for n in (4..=n_max).step_by(2) {
            for m in 2..=if n <= 8 { 5 } else { 4 } {
                let t = Instant::now();
                let v = v_n_breakdown(class, n, m, &model, rule, Budget::UNLIMITED)?;
                let lim = v_asymptotic(m, &model)?;
                println!(
                    "{class},{n},{m},{:.6},{},{},{:.2}",
                    v.value,
                    lim.value,
                    lim.flag,
                    t.elapsed().as_secs_f64()
                );
            }
        }
    }
    Ok(())
}
