//! Matrix spaces of class DIII and CI, the equivalence relation they induce
//! on index pairs, entry laws and matrix sampling.

mod classes;
mod config;
mod model;
mod sample;

pub use classes::{
    build_equivalence_classes, symmetry_stats, ClassKind, ClassTable, EquivClass, Membership,
    SymmetryStats,
};
pub use config::EnsembleConfig;
pub use model::{EntryModel, Family};
pub use sample::{sample_matrix, MatrixSample};
pub(crate) use sample::sample_with_table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Cartan label of the matrix space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryClass {
    /// Blocks purely imaginary and skew-symmetric.
    #[serde(rename = "DIII")]
    Diii,
    /// Blocks real and symmetric.
    #[serde(rename = "CI")]
    Ci,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 2] = [SymmetryClass::Diii, SymmetryClass::Ci];

    /// Whether the blocks are skew-symmetric (diagonals forced to zero).
    pub fn is_skew(self) -> bool {
        matches!(self, SymmetryClass::Diii)
    }

    /// Sign `s` with `E(a^2) = s * E|a|^2` for a representative entry `a`.
    ///
    /// DIII representatives are `i * g` with `g` real, so `a^2 = -|a|^2`.
    pub fn square_sign(self) -> f64 {
        match self {
            SymmetryClass::Diii => -1.0,
            SymmetryClass::Ci => 1.0,
        }
    }

    /// Smallest admissible block size.
    pub fn min_n(self) -> usize {
        match self {
            SymmetryClass::Diii => 2,
            SymmetryClass::Ci => 1,
        }
    }

    pub(crate) fn check_n(self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if n < self.min_n() {
            return Err(Error::DegenerateSpace { n });
        }
        Ok(())
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Diii => "DIII",
            SymmetryClass::Ci => "CI",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "DIII" => Ok(SymmetryClass::Diii),
            "CI" => Ok(SymmetryClass::Ci),
            other => Err(Error::InvalidParameter(format!(
                "unknown symmetry class '{other}' (expected DIII or CI)"
            ))),
        }
    }
}

/// A 1-based index pair `(p, q)` into a `2n x 2n` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexPair {
    pub p: usize,
    pub q: usize,
}

impl IndexPair {
    pub const fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn check(self, dim: usize) -> Result<Self> {
        if self.p == 0 || self.q == 0 || self.p > dim || self.q > dim {
            return Err(Error::OutOfRange {
                p: self.p,
                q: self.q,
                dim,
            });
        }
        Ok(self)
    }

    /// Position in a row-major `dim x dim` table.
    #[inline]
    pub(crate) fn flat(self, dim: usize) -> usize {
        (self.p - 1) * dim + (self.q - 1)
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

impl From<(usize, usize)> for IndexPair {
    fn from((p, q): (usize, usize)) -> Self {
        IndexPair::new(p, q)
    }
}
