//! The delta-pattern calculus: cyclic sequences under both domino
//! conditions, their closed-form counts, the dihedral group and the sign
//! sums that produce the limiting variances.
//!
//! ```text
//! cargo run --example delta_patterns
//! ```

use symmwig::ensemble::SymmetryClass;
use symmwig::patterns::{
    complete_reflection_sequence, count_delta_sequences, dihedral_group, pair_partition,
    per_g_leading_term, signed_sequence_sum, DominoMode, SequenceFilter, SignMode, DELTA_ALPHABET,
};
use symmwig::Budget;

fn main() -> symmwig::Result<()> {
    let filters = [
        SequenceFilter::All,
        SequenceFilter::IdenticalRows,
        SequenceFilter::IdenticalRowsAlpha1,
        SequenceFilter::DifferentRows,
        SequenceFilter::FirstEntryOne,
    ];
    println!("m,condition,filter,count,closed_form");
    for m in [3, 4, 6, 8] {
        for mode in [DominoMode::Forward, DominoMode::Reverse] {
            for f in filters {
                let e = count_delta_sequences(m, mode, f, Budget::default())?;
                println!("{m},{mode},{f},{},{}", e.count, e.closed_form);
            }
        }
    }

    let m = 6;
    println!("\nD_{} and its pair partitions", 2 * m);
    for g in dihedral_group(m)? {
        println!("  {g:<12} {:?}", pair_partition(&g).canonical_blocks());
    }

    // a reflection fixes the sequence once the first delta and m - 2 free bits are chosen
    let first = DELTA_ALPHABET[5];
    let seq = complete_reflection_sequence(first, &[1, 0, 0, 1], m)?;
    let shown: Vec<String> = seq.iter().map(ToString::to_string).collect();
    println!("\ncompletion from {first}: {}", shown.join(" "));

    println!("\nclass,m,forward_sum,reverse_sum,per_g_leading_term");
    for class in SymmetryClass::ALL {
        for m in 3..=8 {
            let fwd = signed_sequence_sum(class, SignMode::ForwardA, m)?;
            let rev = signed_sequence_sum(class, SignMode::ReverseR, m)?;
            let g = &dihedral_group(m)?[1];
            println!("{class},{m},{fwd},{rev},{}", per_g_leading_term(class, g, m, 1.0)?);
        }
    }
    Ok(())
}
