//! Entry equivalence classes of the DIII and CI spaces, their growth
//! constants, and a sampled matrix rebuilt from one draw per class.
//!
//! ```text
//! cargo run --example equivalence_classes -- 3
//! ```

use symmwig::ensemble::{sample_matrix, symmetry_stats, ClassTable, EnsembleConfig, SymmetryClass};

fn main() -> symmwig::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);

    for class in SymmetryClass::ALL {
        let table = ClassTable::new(class, n)?;
        let stats = symmetry_stats(class, n)?;
        println!(
            "{class}, n = {n}: {} classes, alpha2 = {}, alpha0_hat = {}",
            table.len(),
            stats.alpha2,
            stats.alpha0_hat
        );
        for c in table.classes().iter().take(6) {
            let members: Vec<String> = c
                .members
                .iter()
                .map(|(p, s)| format!("{}{}", if *s > 0 { "+" } else { "-" }, p))
                .collect();
            println!("  {:<10} {}", c.label(), members.join(" "));
        }
        if table.len() > 6 {
            println!("  ... {} more", table.len() - 6);
        }
    }

    // the key-value block used by config files
    let cfg = EnsembleConfig::parse("class=DIII\nn=2\nfamily=rademacher\nseed=7\n")?;
    let s = sample_matrix(cfg.class, cfg.n, &cfg.model, cfg.seed)?;
    println!("\n{cfg}");
    let c = s.to_complex();
    for i in 0..s.dim() {
        let row: Vec<String> = (0..s.dim()).map(|j| format!("{:+.3}i", c[[i, j]].im)).collect();
        println!("  {}", row.join(" "));
    }
    Ok(())
}
