//! Delta/lambda patterns, domino conditions, the dihedral group acting on
//! pairs of cycles, sign tables and the closed-form counts built on them.

mod delta;
mod dihedral;
mod instances;
mod sequences;
mod signs;

pub use delta::{
    check_domino, classify_delta, delta_alphabet, DeltaMatrix, DeltaShape, DominoMode, DELTA_ALPHABET,
};
pub use dihedral::{dihedral_group, pair_partition, DihedralElement, DihedralKind, PairPartition};
pub use instances::{
    count_consistent_instances, count_instances, is_substantial, is_substantial_under, Instance,
    LambdaKind, Pattern,
};
pub use sequences::{
    all_reflection_sequences, closed_form_count, complete_reflection_sequence, count_delta_sequences,
    enumerate_delta_sequences, in_positive_set, SequenceEnumeration, SequenceFilter,
    INVARIANT_SET_MIXED, INVARIANT_SET_POSITIVE, MAX_SEQUENCE_LENGTH,
};
pub use signs::{
    delta_sign, per_g_leading_term, per_g_normalized_limit, signed_sequence_sum, SignMode,
};
