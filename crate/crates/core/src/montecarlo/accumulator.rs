use serde::Serialize;

use crate::{Error, Result};

/// Mergeable power sums of a vector-valued stream.
///
/// Values are stored relative to a fixed `shift` (one per coordinate) so that
/// large means do not swamp the higher central moments. Only accumulators
/// with the same shift can be merged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentAccumulator {
    pub count: u64,
    pub shift: Vec<f64>,
    /// `sums[k][i] = sum of y_i^(k+1)`, `k = 0..4`.
    pub sums: [Vec<f64>; 4],
    /// Upper triangle, row-major: `sum of y_i y_j` for `i <= j`.
    pub cross: Vec<f64>,
}

impl MomentAccumulator {
    pub fn new(dim: usize) -> Self {
        Self::with_shift(vec![0.0; dim])
    }

    pub fn with_shift(shift: Vec<f64>) -> Self {
        let d = shift.len();
        Self {
            count: 0,
            shift,
            sums: std::array::from_fn(|_| vec![0.0; d]),
            cross: vec![0.0; d * (d + 1) / 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn push(&mut self, x: &[f64]) -> Result<()> {
        let d = self.dim();
        if x.len() != d {
            return Err(Error::ShapeMismatch(format!("{} values for a {d}-dimensional accumulator", x.len())));
        }
        self.count += 1;
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(v, s)| v - s).collect();
        for (i, &yi) in y.iter().enumerate() {
            let mut p = yi;
            for sum in self.sums.iter_mut() {
                sum[i] += p;
                p *= yi;
            }
        }
        let mut idx = 0;
        for i in 0..d {
            for j in i..d {
                self.cross[idx] += y[i] * y[j];
                idx += 1;
            }
        }
        Ok(())
    }

    /// Accumulator of the concatenated streams.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.merge_from(other)?;
        Ok(out)
    }

    pub fn merge_from(&mut self, other: &Self) -> Result<()> {
        if self.shift != other.shift {
            return Err(Error::ShapeMismatch("accumulators with different shape or shift".into()));
        }
        self.count += other.count;
        for k in 0..4 {
            for (a, b) in self.sums[k].iter_mut().zip(&other.sums[k]) {
                *a += b;
            }
        }
        for (a, b) in self.cross.iter_mut().zip(&other.cross) {
            *a += b;
        }
        Ok(())
    }

    pub(crate) fn cross_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let d = self.dim();
        i * d - i * (i + 1) / 2 + j
    }

    pub fn mean(&self) -> Vec<f64> {
        let n = self.count as f64;
        self.sums[0].iter().zip(&self.shift).map(|(s, c)| s / n + c).collect()
    }

    /// Unbiased covariance `Cov(x_i, x_j)`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        let n = self.count as f64;
        let (mi, mj) = (self.sums[0][i] / n, self.sums[0][j] / n);
        (self.cross[self.cross_index(i, j)] - n * mi * mj) / (n - 1.0)
    }

    /// Central moments `(m2, m3, m4)` of coordinate `i` (divided by `n`).
    pub fn central_moments(&self, i: usize) -> (f64, f64, f64) {
        let n = self.count as f64;
        let mu = self.sums[0][i] / n;
        let s2 = self.sums[1][i] / n;
        let s3 = self.sums[2][i] / n;
        let s4 = self.sums[3][i] / n;
        let m2 = s2 - mu * mu;
        let m3 = s3 - 3.0 * mu * s2 + 2.0 * mu * mu * mu;
        let m4 = s4 - 4.0 * mu * s3 + 6.0 * mu * mu * s2 - 3.0 * mu.powi(4);
        (m2.max(0.0), m3, m4.max(0.0))
    }

    /// Standardized k-statistics `(k3 / k2^1.5, k4 / k2^2)` of coordinate `i`.
    pub fn standardized_cumulants(&self, i: usize) -> Option<(f64, f64)> {
        let n = self.count as f64;
        if n < 4.0 {
            return None;
        }
        let (m2, m3, m4) = self.central_moments(i);
        let k2 = n / (n - 1.0) * m2;
        if k2 <= 0.0 {
            return None;
        }
        let k3 = n * n / ((n - 1.0) * (n - 2.0)) * m3;
        let k4 = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) / ((n - 1.0) * (n - 2.0) * (n - 3.0));
        Some((k3 / k2.powf(1.5), k4 / (k2 * k2)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// Leave-one-block-out jackknife standard error.
    pub se: f64,
}

/// Summary statistics with jackknife errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulantEstimate {
    pub count: u64,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<Estimate>>,
    /// `None` where the coordinate is numerically constant.
    pub k3: Vec<Option<Estimate>>,
    pub k4: Vec<Option<Estimate>>,
    pub degenerate: Vec<bool>,
}

/// Threshold below which a coordinate's variance counts as zero.
pub fn degenerate_variance(scale: f64) -> f64 {
    (1e-9 * scale.max(1.0)).powi(2)
}

/// Estimates from per-block accumulators (merged in order), with jackknife
/// standard errors over blocks. `scale` sets the degeneracy threshold.
pub fn estimate_cumulants(blocks: &[MomentAccumulator], scale: f64) -> Result<CumulantEstimate> {
    let Some(first) = blocks.first() else {
        return Err(Error::InvalidParameter("no accumulator blocks".into()));
    };
    let d = first.dim();
    let mut total = MomentAccumulator::with_shift(first.shift.clone());
    for b in blocks {
        total.merge_from(b)?;
    }
    if total.count < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    // leave-one-out accumulators via prefix and suffix merges
    let nb = blocks.len();
    let mut prefix = Vec::with_capacity(nb + 1);
    prefix.push(MomentAccumulator::with_shift(first.shift.clone()));
    for b in blocks {
        let next = prefix.last().expect("seeded").merge(b)?;
        prefix.push(next);
    }
    let mut suffix = vec![MomentAccumulator::with_shift(first.shift.clone()); nb + 1];
    for i in (0..nb).rev() {
        suffix[i] = suffix[i + 1].merge(&blocks[i])?;
    }
    let loo: Vec<MomentAccumulator> = (0..nb)
        .map(|i| prefix[i].merge(&suffix[i + 1]))
        .collect::<Result<_>>()?;
    let jack = nb >= 2 && loo.iter().all(|a| a.count >= 4);

    let se_of = |vals: &[f64]| -> f64 {
        if !jack {
            return f64::NAN;
        }
        let k = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / k;
        ((k - 1.0) / k * vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()).sqrt()
    };

    let threshold = degenerate_variance(scale);
    let degenerate: Vec<bool> = (0..d).map(|i| total.covariance(i, i) <= threshold).collect();
    let mut cov = vec![vec![Estimate { value: 0.0, se: 0.0 }; d]; d];
    for i in 0..d {
        for j in i..d {
            let value = total.covariance(i, j);
            let se = if degenerate[i] || degenerate[j] {
                0.0
            } else {
                se_of(&loo.iter().map(|a| a.covariance(i, j)).collect::<Vec<_>>())
            };
            cov[i][j] = Estimate { value, se };
            cov[j][i] = Estimate { value, se };
        }
    }
    let mut k3 = vec![None; d];
    let mut k4 = vec![None; d];
    for i in 0..d {
        if degenerate[i] {
            continue;
        }
        if let Some((a, b)) = total.standardized_cumulants(i) {
            let parts: Vec<(f64, f64)> = loo.iter().filter_map(|l| l.standardized_cumulants(i)).collect();
            let (sa, sb) = if parts.len() == loo.len() {
                (
                    se_of(&parts.iter().map(|p| p.0).collect::<Vec<_>>()),
                    se_of(&parts.iter().map(|p| p.1).collect::<Vec<_>>()),
                )
            } else {
                (f64::NAN, f64::NAN)
            };
            k3[i] = Some(Estimate { value: a, se: sa });
            k4[i] = Some(Estimate { value: b, se: sb });
        }
    }
    Ok(CumulantEstimate {
        count: total.count,
        mean: total.mean(),
        cov,
        k3,
        k4,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp, StandardNormal};

    fn acc_of(rows: &[Vec<f64>], shift: &[f64]) -> MomentAccumulator {
        let mut a = MomentAccumulator::with_shift(shift.to_vec());
        for r in rows {
            a.push(r).unwrap();
        }
        a
    }

    fn magnitude(rows: &[Vec<f64>], shift: &[f64]) -> MomentAccumulator {
        let abs: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().zip(shift).map(|(v, s)| (v - s).abs()).collect()).collect();
        acc_of(&abs, &vec![0.0; shift.len()])
    }

    fn close(a: &MomentAccumulator, b: &MomentAccumulator, scale: &MomentAccumulator, tol: f64) -> bool {
        let near = |u: f64, v: f64, w: f64| (u - v).abs() <= tol * w.max(1.0);
        a.count == b.count
            && (0..4).all(|k| (0..a.dim()).all(|i| near(a.sums[k][i], b.sums[k][i], scale.sums[k][i])))
            && (0..a.cross.len()).all(|i| near(a.cross[i], b.cross[i], scale.cross[i]))
    }

    fn rows_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 3), 0..20)
    }

    proptest! {
        #[test]
        fn merge_equals_concatenation(a in rows_strategy(), b in rows_strategy(), c in rows_strategy()) {
            let shift = [1.0, -2.0, 0.5];
            let (x, y, z) = (acc_of(&a, &shift), acc_of(&b, &shift), acc_of(&c, &shift));
            let mut abc = a.clone();
            abc.extend(b.clone());
            abc.extend(c.clone());
            let seq = acc_of(&abc, &shift);
            let left = x.merge(&y).unwrap().merge(&z).unwrap();
            let right = x.merge(&y.merge(&z).unwrap()).unwrap();
            let scale = magnitude(&abc, &shift);
            prop_assert!(close(&left, &seq, &scale, 1e-12));
            prop_assert!(close(&left, &right, &scale, 1e-12));
            prop_assert!(close(&x.merge(&y).unwrap(), &y.merge(&x).unwrap(), &scale, 1e-12));
            prop_assert_eq!(x.merge(&MomentAccumulator::with_shift(shift.to_vec())).unwrap(), x);
        }
    }

    #[test]
    fn shape_checks() {
        let mut a = MomentAccumulator::new(2);
        assert!(a.push(&[1.0]).is_err());
        assert!(a.merge(&MomentAccumulator::new(3)).is_err());
    }

    fn blocked(samples: &[Vec<f64>], blocks: usize) -> Vec<MomentAccumulator> {
        let d = samples[0].len();
        let per = samples.len() / blocks;
        samples
            .chunks(per)
            .map(|c| acc_of(c, &vec![0.0; d]))
            .collect()
    }

    #[test]
    fn normal_stream_has_vanishing_cumulants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<Vec<f64>> = (0..20_000)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                vec![0.0, z, 3.0 + 2.0 * z + rng.random::<f64>()]
            })
            .collect();
        let est = estimate_cumulants(&blocked(&samples, 100), 1.0).unwrap();
        assert!(est.degenerate[0]);
        assert!(est.k3[0].is_none());
        assert_eq!(est.cov[0][0].value, 0.0);
        assert_eq!(est.cov[0][2].value, 0.0);
        let k3 = est.k3[1].unwrap();
        let k4 = est.k4[1].unwrap();
        assert!(k3.value.abs() <= 3.0 * k3.se, "{k3:?}");
        assert!(k4.value.abs() <= 3.0 * k4.se, "{k4:?}");
        assert!((est.cov[1][1].value - 1.0).abs() <= 3.0 * est.cov[1][1].se);
        assert!((est.cov[1][2].value - 2.0).abs() <= 3.0 * est.cov[1][2].se);
    }

    #[test]
    fn exponential_stream_has_skewness_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let exp = Exp::new(1.0).unwrap();
        let samples: Vec<Vec<f64>> = (0..20_000).map(|_| vec![exp.sample(&mut rng) - 1.0]).collect();
        let est = estimate_cumulants(&blocked(&samples, 100), 1.0).unwrap();
        let k3 = est.k3[0].unwrap();
        assert!((k3.value - 2.0).abs() <= 3.0 * k3.se, "{k3:?}");
        let k4 = est.k4[0].unwrap();
        assert!((k4.value - 6.0).abs() <= 3.0 * k4.se, "{k4:?}");
    }
}
