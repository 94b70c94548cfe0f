use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::accumulator::{estimate_cumulants, CumulantEstimate, MomentAccumulator};
use crate::chebyshev::trace_cheb_vector;
use crate::ensemble::{sample_with_table, ClassTable, EntryModel, SymmetryClass};
use crate::numeric::derive_seed;
use crate::{Error, Result};

/// Number of jackknife blocks (fewer when there are fewer samples).
pub const JACKKNIFE_BLOCKS: usize = 100;

/// Environment variable consulted when no thread count is given.
pub const THREADS_ENV: &str = "SYMMWIG_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub class: SymmetryClass,
    pub n: usize,
    pub model: EntryModel,
    /// Largest Chebyshev degree `M`.
    pub max_degree: usize,
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; `None` falls back to `SYMMWIG_THREADS`, then to all cores.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl SimulationConfig {
    pub fn new(class: SymmetryClass, n: usize, model: EntryModel, max_degree: usize, samples: usize, seed: u64) -> Self {
        Self {
            class,
            n,
            model,
            max_degree,
            samples,
            seed,
            threads: None,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn sigma(&self) -> f64 {
        self.model.sigma()
    }

    pub fn validate(&self) -> Result<()> {
        self.class.check_n(self.n)?;
        if self.samples < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 samples, got {}", self.samples)));
        }
        if self.max_degree == 0 {
            return Err(Error::InvalidParameter("max degree M must be >= 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be >= 1".into()));
        }
        Ok(())
    }

    fn resolved_threads(&self) -> Result<Option<usize>> {
        if let Some(t) = self.threads {
            return Ok(Some(t));
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(t) if t > 0 => Ok(Some(t)),
                _ => Err(Error::InvalidParameter(format!("{THREADS_ENV}={v} is not a positive integer"))),
            },
            Err(_) => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationResult {
    pub config: SimulationConfig,
    /// `estimates.mean[m - 1]` etc. refer to `Tr T_m`.
    pub estimates: CumulantEstimate,
    pub blocks: usize,
    pub wall_time_secs: f64,
}

impl PartialEq for SimulationResult {
    /// Wall time and thread count are ignored.
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.config, &other.config);
        a.class == b.class
            && a.n == b.n
            && a.model == b.model
            && a.max_degree == b.max_degree
            && a.samples == b.samples
            && a.seed == b.seed
            && self.estimates == other.estimates
            && self.blocks == other.blocks
    }
}

impl SimulationResult {
    pub fn variance(&self, m: usize) -> f64 {
        self.estimates.cov[m - 1][m - 1].value
    }

    pub fn variance_se(&self, m: usize) -> f64 {
        self.estimates.cov[m - 1][m - 1].se
    }
}

/// The trace vector `(Tr T_1, ..., Tr T_M)` of sample `index`.
pub fn sample_traces(config: &SimulationConfig, table: &ClassTable, index: u64) -> Result<Vec<f64>> {
    let sample = sample_with_table(table, &config.model, derive_seed(config.seed, index))?;
    trace_cheb_vector(&sample, config.max_degree, config.sigma())
}

/// Draw `samples` matrices and estimate the moments of their Chebyshev traces.
///
/// Sample `i` uses the seed `derive_seed(seed, i)`. Samples are split into a
/// fixed set of contiguous blocks whose accumulators are merged in block
/// order, so the result does not depend on the number of threads.
pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let start = Instant::now();
    let table = ClassTable::new(config.class, config.n)?;
    let shift = sample_traces(config, &table, 0)?;
    let nblocks = JACKKNIFE_BLOCKS.min(config.samples);
    let bounds: Vec<(usize, usize)> = (0..nblocks)
        .map(|b| (b * config.samples / nblocks, (b + 1) * config.samples / nblocks))
        .collect();

    let work = || -> Result<Vec<MomentAccumulator>> {
        bounds
            .par_iter()
            .map(|&(lo, hi)| {
                let mut acc = MomentAccumulator::with_shift(shift.clone());
                for i in lo..hi {
                    acc.push(&sample_traces(config, &table, i as u64)?)?;
                }
                Ok(acc)
            })
            .collect()
    };
    let blocks = match config.resolved_threads()? {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let scale = 2.0 * config.n as f64 * config.sigma().powi(config.max_degree as i32).max(1.0);
    let estimates = estimate_cumulants(&blocks, scale)?;
    Ok(SimulationResult {
        config: config.clone(),
        estimates,
        blocks: nblocks,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(class: SymmetryClass) -> SimulationConfig {
        SimulationConfig::new(class, 4, EntryModel::gaussian(1.0).unwrap(), 4, 300, 42)
    }

    #[test]
    fn first_degree_has_zero_variance() {
        for class in SymmetryClass::ALL {
            let r = run_simulation(&cfg(class)).unwrap();
            assert_eq!(r.variance(1), 0.0);
            assert!(r.estimates.degenerate[0]);
            assert!(r.estimates.degenerate[2]);
            assert!(r.variance(2) > 0.0);
        }
    }

    #[test]
    fn identical_across_thread_counts() {
        let a = run_simulation(&cfg(SymmetryClass::Ci).with_threads(1)).unwrap();
        let b = run_simulation(&cfg(SymmetryClass::Ci).with_threads(8)).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_value(&a.estimates).unwrap(),
            serde_json::to_value(&b.estimates).unwrap()
        );
        let c = run_simulation(&SimulationConfig { seed: 43, ..cfg(SymmetryClass::Ci) }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn invalid_configs() {
        let mut c = cfg(SymmetryClass::Diii);
        c.samples = 1;
        assert!(run_simulation(&c).is_err());
        let mut c = cfg(SymmetryClass::Diii);
        c.n = 1;
        assert!(run_simulation(&c).is_err());
        assert!(run_simulation(&cfg(SymmetryClass::Diii).with_threads(0)).is_err());
    }
}
