//! Wigner-type random matrices built on the tangent spaces of the symmetric
//! spaces of Cartan class DIII and CI.
//!
//! A matrix of either class has the block form
//!
//! ```text
//!     [  X1   X2 ]
//!     [  X2  -X1 ]
//! ```
//!
//! with `X1`, `X2` purely imaginary skew-symmetric (DIII) or real symmetric
//! (CI), normalized by `1/sqrt(2n)`. The crate provides
//!
//! * [`ensemble`]: the entry equivalence classes, entry laws and sampling,
//! * [`chebyshev`]: rescaled Chebyshev polynomials and their matrix traces,
//! * [`patterns`]: the delta/lambda pattern calculus, domino conditions,
//!   the dihedral group and its pair partitions, sign tables and counts,
//! * [`covariance`]: exact finite-n covariance formulas plus two independent
//!   brute-force oracles,
//! * [`montecarlo`]: reproducible parallel sampling of trace vectors with
//!   mergeable moment accumulators and CLT reports,
//! * [`cli`]: the `symmwig` command-line front end.

mod budget;
pub mod chebyshev;
pub mod cli;
pub mod covariance;
pub mod ensemble;
mod error;
pub mod montecarlo;
pub mod numeric;
pub mod patterns;

pub use budget::Budget;
pub use error::{Error, Result};
