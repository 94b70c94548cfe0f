//! Rescaled Chebyshev polynomials and the traces `Tr T_m(X, sigma)` of
//! sampled matrices.
//!
//! ```text
//! cargo run --release --example chebyshev_traces -- 200
//! ```

use symmwig::chebyshev::{cheb_coefficients, trace_cheb_vector};
use symmwig::ensemble::{sample_matrix, EntryModel, SymmetryClass};

fn main() -> symmwig::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let sigma = 1.5;

    for m in 0..=6 {
        let spec = cheb_coefficients(m, sigma)?;
        println!("T_{m}(x, {sigma}): {:?}", spec.power_coefficients());
    }

    // fluctuations are O(1) although each trace is a sum of 2n terms
    let model = EntryModel::gaussian(sigma * sigma)?;
    for class in SymmetryClass::ALL {
        println!("\n{class}, 2n = {}", 2 * n);
        for seed in 0..4 {
            let s = sample_matrix(class, n, &model, seed)?;
            let t = trace_cheb_vector(&s, 6, sigma)?;
            let cells: Vec<String> = t.iter().map(|v| format!("{v:9.3}")).collect();
            println!("  seed {seed}: {}", cells.join(" "));
        }
    }
    Ok(())
}
