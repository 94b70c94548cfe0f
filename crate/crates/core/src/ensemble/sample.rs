use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClassTable, EntryModel, SymmetryClass};
use crate::{Error, Result};

/// One normalized `2n x 2n` Hermitian draw.
///
/// Stored as a real matrix `W`: the actual matrix is `W` for CI and `i * W`
/// for DIII (where `W` is then real antisymmetric). The `1/sqrt(2n)`
/// normalization is already applied.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSample {
    class: SymmetryClass,
    n: usize,
    seed: Option<u64>,
    values: Array2<f64>,
}

impl MatrixSample {
    /// Assemble a matrix from one real draw per equivalence class.
    ///
    /// `draws[i]` is the real variable behind class `i` of `table`.
    pub fn from_class_draws(table: &ClassTable, draws: &[f64]) -> Result<Self> {
        if draws.len() != table.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} draws for {} classes",
                draws.len(),
                table.len()
            )));
        }
        let n = table.n();
        let dim = 2 * n;
        let scale = 1.0 / (dim as f64).sqrt();
        let mut values = Array2::<f64>::zeros((dim, dim));
        for (class, &g) in table.classes().iter().zip(draws) {
            let v = g * scale;
            for &(pair, sign) in &class.members {
                values[[pair.p - 1, pair.q - 1]] = if sign > 0 { v } else { -v };
            }
        }
        Ok(Self {
            class: table.class(),
            n,
            seed: None,
            values,
        })
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// The real matrix `W` (see the type docs for the phase convention).
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Whether the stored values carry an implicit factor `i`.
    pub fn is_imaginary(&self) -> bool {
        self.class.is_skew()
    }

    /// Entry at 1-based `(p, q)`.
    pub fn entry(&self, p: usize, q: usize) -> Complex64 {
        let w = self.values[[p - 1, q - 1]];
        if self.is_imaginary() {
            Complex64::new(0.0, w)
        } else {
            Complex64::new(w, 0.0)
        }
    }

    pub fn to_complex(&self) -> Array2<Complex64> {
        let imaginary = self.is_imaginary();
        self.values.mapv(|w| {
            if imaginary {
                Complex64::new(0.0, w)
            } else {
                Complex64::new(w, 0.0)
            }
        })
    }

    #[cfg(test)]
    pub(crate) fn replace_values(&mut self, values: Array2<f64>) {
        self.values = values;
    }

    /// Trace of the matrix, summing the two diagonal blocks separately so
    /// that the `X1` / `-X1` cancellation is exact.
    pub fn trace(&self) -> Complex64 {
        let n = self.n;
        let top: f64 = (0..n).map(|i| self.values[[i, i]]).sum();
        let bottom: f64 = (n..2 * n).map(|i| self.values[[i, i]]).sum();
        let t = top + bottom;
        if self.is_imaginary() {
            Complex64::new(0.0, t)
        } else {
            Complex64::new(t, 0.0)
        }
    }
}

/// Draw one matrix: one independent draw per class, copied with signs to all
/// members. Deterministic in `seed` (ChaCha8 stream, classes in table order).
pub fn sample_matrix(
    class: SymmetryClass,
    n: usize,
    model: &EntryModel,
    seed: u64,
) -> Result<MatrixSample> {
    let table = ClassTable::new(class, n)?;
    sample_with_table(&table, model, seed)
}

/// As [`sample_matrix`], reusing a prebuilt class table.
pub(crate) fn sample_with_table(
    table: &ClassTable,
    model: &EntryModel,
    seed: u64,
) -> Result<MatrixSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<f64> = (0..table.len()).map(|_| model.draw(&mut rng)).collect();
    let mut sample = MatrixSample::from_class_draws(table, &draws)?;
    sample.seed = Some(seed);
    Ok(sample)
}
