//! Reproducible parallel sampling of Chebyshev trace vectors, mergeable
//! moment accumulators, jackknife errors and CLT reports.

mod accumulator;
mod report;
mod simulate;

pub use accumulator::{
    degenerate_variance, estimate_cumulants, CumulantEstimate, Estimate, MomentAccumulator,
};
pub use report::{clt_report, CltReport, CltThresholds, CrossLine, DegreeLine};
pub use simulate::{
    run_simulation, sample_traces, SimulationConfig, SimulationResult, JACKKNIFE_BLOCKS, THREADS_ENV,
};
