//! Finite-n trace covariances: the pair-partition formula, the limiting
//! variances, and two brute-force oracles for cross-checking.

mod exact;
mod multiindex;
mod oracle;

pub use exact::{
    cov_report, v_asymptotic, v_n_breakdown, v_n_exact, Asymptotic, CovReport, CovRow, PerGTerm,
    ValueFlag, VnBreakdown,
};
pub use multiindex::{
    enumerate_consistent_multiindices, good_multiindices, induced_partition, GoodRule,
    InducedPartition, MultiIndex,
};
pub use oracle::{
    config_oracle_matrix, cov_traces_config_oracle, cov_traces_moment_oracle, MomentOracle,
};
