//! Rescaled Chebyshev polynomials of the first kind, normalized so that
//! `T_m(2 cos t) = 2 cos(m t)`, and traces `Tr T_m(X, sigma)` of sampled
//! matrices.
//!
//! `T_m(x, sigma) = sigma^m T_m(x / sigma)` obeys
//! `T_{m+1} = x T_m - sigma^2 T_{m-1}` with `T_0 = 2`, `T_1 = x`, and the
//! product rule `T_j T_k = T_{j+k} + sigma^{2k} T_{j-k}` for `j >= k`.

use ndarray::Array2;
use serde::Serialize;

use crate::ensemble::MatrixSample;
use crate::numeric::powi;
use crate::{Error, Result};

/// Integer coefficients of `T_m(x, sigma)`:
/// `T_m(x, sigma) = sum_k coeffs[k] * x^k * sigma^(m - k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebSpec {
    pub m: usize,
    pub sigma: f64,
    pub coeffs: Vec<i64>,
}

/// Largest degree whose integer coefficients fit comfortably in `i64`.
pub const MAX_DEGREE: usize = 60;

/// Largest `dim^2 * (stored matrices)` the dense trace recurrence accepts.
pub const MAX_WORKSPACE: usize = 1 << 28;

pub fn cheb_coefficients(m: usize, sigma: f64) -> Result<ChebSpec> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    if m > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!("degree {m} above {MAX_DEGREE}")));
    }
    let mut prev = vec![2i64];
    let mut cur = vec![0i64, 1];
    if m == 0 {
        cur = prev;
    } else {
        for _ in 1..m {
            let mut next = vec![0i64; cur.len() + 1];
            for (k, &c) in cur.iter().enumerate() {
                next[k + 1] += c;
            }
            for (k, &c) in prev.iter().enumerate() {
                next[k] -= c;
            }
            prev = std::mem::replace(&mut cur, next);
        }
    }
    Ok(ChebSpec {
        m,
        sigma,
        coeffs: cur,
    })
}

impl ChebSpec {
    /// Coefficient of `x^k` with the sigma power folded in.
    pub fn power_coefficients(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * powi(self.sigma, self.m - k))
            .collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.power_coefficients()
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Scalar evaluation through the three-term recurrence.
pub fn cheb_eval(m: usize, sigma: f64, x: f64) -> f64 {
    let s2 = sigma * sigma;
    let (mut prev, mut cur) = (2.0, x);
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = x * cur - s2 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn trace_split(a: &Array2<f64>) -> f64 {
    // two halves summed separately: the -X1 block cancels X1 exactly
    let d = a.nrows();
    let h = d / 2;
    let top: f64 = (0..h).map(|i| a[[i, i]]).sum();
    let bottom: f64 = (h..d).map(|i| a[[i, i]]).sum();
    top + bottom
}

/// `Tr(A B)` without forming the product.
fn trace_of_product(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let mut acc = 0.0;
    for (i, row) in a.outer_iter().enumerate() {
        let col = b.column(i);
        acc += row.iter().zip(col.iter()).map(|(x, y)| x * y).sum::<f64>();
    }
    acc
}

/// `(Tr T_1(X, sigma), ..., Tr T_M(X, sigma))`.
///
/// With `X = W` (CI) or `X = i W` (DIII) write `T_m(X) = phase^m S_m`, where
/// the real matrices `S_m` satisfy `S_{m+1} = W S_m - q S_{m-1}`,
/// `q = +sigma^2` (CI) or `-sigma^2` (DIII). Only `S_1 .. S_ceil(M/2)` are
/// formed; higher traces come from `Tr S_{j+k} = Tr(S_j S_k) - q^k Tr S_{j-k}`.
pub fn trace_cheb_vector(sample: &MatrixSample, max_degree: usize, sigma: f64) -> Result<Vec<f64>> {
    if max_degree == 0 {
        return Err(Error::InvalidParameter("need at least degree 1".into()));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let dim = sample.dim();
    let half = max_degree.div_ceil(2);
    let required = dim.saturating_mul(dim).saturating_mul(half + 1);
    if required > MAX_WORKSPACE || max_degree > MAX_DEGREE {
        return Err(Error::BudgetExceeded {
            what: "Chebyshev trace workspace",
            required: required as u128,
            limit: MAX_WORKSPACE as u128,
        });
    }
    let w = sample.values();
    let q = sample.class().square_sign() * sigma * sigma;

    let mut mats: Vec<Array2<f64>> = Vec::with_capacity(half + 1);
    mats.push(Array2::eye(dim) * 2.0);
    mats.push(w.clone());
    for k in 1..half {
        let next = w.dot(&mats[k]) - &mats[k - 1] * q;
        mats.push(next);
    }

    let mut s_traces = vec![0.0; max_degree + 1];
    s_traces[0] = 2.0 * dim as f64;
    for (k, m) in mats.iter().enumerate().skip(1) {
        s_traces[k] = trace_split(m);
    }
    for m in half + 1..=max_degree {
        let k = m - half;
        s_traces[m] = trace_of_product(&mats[half], &mats[k]) - powi(q, k) * s_traces[half - k];
    }

    let imaginary = sample.is_imaginary();
    let mut out = Vec::with_capacity(max_degree);
    for (m, &t) in s_traces.iter().enumerate().skip(1) {
        if !imaginary {
            out.push(t);
            continue;
        }
        // i^m: real for even m, purely imaginary for odd m
        if m % 2 == 0 {
            out.push(if m % 4 == 0 { t } else { -t });
        } else {
            let tolerance = 1e-9 * dim as f64 * powi(sigma, m).max(1.0);
            if t.abs() > tolerance {
                return Err(Error::ImaginaryTrace {
                    degree: m,
                    value: t,
                    tolerance,
                });
            }
            out.push(0.0);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_matrix, ClassTable, EntryModel, SymmetryClass};

    #[test]
    fn low_degree_coefficients() {
        assert_eq!(cheb_coefficients(0, 1.0).unwrap().coeffs, vec![2]);
        assert_eq!(cheb_coefficients(1, 3.0).unwrap().coeffs, vec![0, 1]);
        assert_eq!(cheb_coefficients(2, 1.0).unwrap().coeffs, vec![-2, 0, 1]);
        // x^3 - 3 sigma^2 x
        assert_eq!(cheb_coefficients(3, 1.0).unwrap().coeffs, vec![0, -3, 0, 1]);
        let t3 = cheb_coefficients(3, 2.0).unwrap();
        assert_eq!(t3.power_coefficients(), vec![0.0, -12.0, 0.0, 1.0]);
    }

    #[test]
    fn cosine_identity_and_recurrence() {
        for &sigma in &[0.5, 1.0, 2.0] {
            for m in 0..=12 {
                let spec = cheb_coefficients(m, sigma).unwrap();
                for i in 0..64 {
                    let theta = 0.1 + i as f64 * std::f64::consts::PI / 64.0;
                    let x = 2.0 * sigma * theta.cos();
                    let want = 2.0 * powi(sigma, m) * (m as f64 * theta).cos();
                    let tol = 1e-12 * powi(sigma, m).max(1.0) * 2f64.powi(m as i32);
                    assert!((spec.eval(x) - want).abs() <= tol, "m={m} sigma={sigma}");
                    assert!((cheb_eval(m, sigma, x) - want).abs() <= tol);
                }
            }
        }
    }

    #[test]
    fn zero_matrix_second_degree() {
        let n = 3;
        let table = ClassTable::new(SymmetryClass::Ci, n).unwrap();
        let zero = MatrixSample::from_class_draws(&table, &vec![0.0; table.len()]).unwrap();
        let t = trace_cheb_vector(&zero, 4, 1.0).unwrap();
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1], -2.0 * (2 * n) as f64);
        // T_4(0) = 2 per eigenvalue
        assert_eq!(t[3], 2.0 * (2 * n) as f64);
    }

    #[test]
    fn first_degree_exactly_zero() {
        let m = EntryModel::gaussian(1.0).unwrap();
        for class in SymmetryClass::ALL {
            for seed in 0..20 {
                let s = sample_matrix(class, 6, &m, seed).unwrap();
                assert_eq!(trace_cheb_vector(&s, 5, 1.3).unwrap()[0], 0.0);
            }
        }
    }

    #[test]
    fn degree_zero_rejected() {
        let s = sample_matrix(SymmetryClass::Ci, 2, &EntryModel::gaussian(1.0).unwrap(), 0).unwrap();
        assert!(trace_cheb_vector(&s, 0, 1.0).is_err());
        assert!(trace_cheb_vector(&s, 2, 0.0).is_err());
    }

    #[test]
    fn broken_hermiticity_is_reported() {
        let table = ClassTable::new(SymmetryClass::Diii, 3).unwrap();
        let mut s = MatrixSample::from_class_draws(&table, &[1.0; 6]).unwrap();
        // |W| is symmetric, so i|W| is anti-Hermitian and has imaginary odd traces
        let bad = s.values().mapv(f64::abs);
        s.replace_values(bad);
        assert!(matches!(
            trace_cheb_vector(&s, 3, 1.0),
            Err(Error::ImaginaryTrace { degree: 3, .. })
        ));
    }

    fn eigen_traces(s: &MatrixSample, max_degree: usize, sigma: f64) -> Vec<f64> {
        let dim = s.dim();
        let c = s.to_complex();
        let mat = nalgebra::DMatrix::from_fn(dim, dim, |i, j| c[[i, j]]);
        let eig = nalgebra::SymmetricEigen::new(mat).eigenvalues;
        (1..=max_degree)
            .map(|m| eig.iter().map(|&l| cheb_eval(m, sigma, l)).sum())
            .collect()
    }

    fn close(a: f64, b: f64, rel: f64, scale: f64) -> bool {
        (a - b).abs() <= rel * scale.max(b.abs())
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn matches_eigenvalue_oracle(ci in proptest::bool::ANY, n in 2usize..7, seed in 0u64..1000, sigma in 0.5f64..2.0) {
            let class = if ci { SymmetryClass::Ci } else { SymmetryClass::Diii };
            let model = EntryModel::gaussian(sigma * sigma).unwrap();
            let s = sample_matrix(class, n, &model, seed).unwrap();
            let fast = trace_cheb_vector(&s, 6, sigma).unwrap();
            let slow = eigen_traces(&s, 6, sigma);
            for (m, (a, b)) in fast.iter().zip(&slow).enumerate() {
                let scale = 2.0 * n as f64 * powi(sigma, m + 1);
                proptest::prop_assert!(close(*a, *b, 1e-8, scale), "m={} {} vs {}", m + 1, a, b);
            }
        }

        #[test]
        fn permutation_invariance(ci in proptest::bool::ANY, n in 2usize..6, seed in 0u64..1000, perm_seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let class = if ci { SymmetryClass::Ci } else { SymmetryClass::Diii };
            let s = sample_matrix(class, n, &EntryModel::gaussian(1.0).unwrap(), seed).unwrap();
            let dim = s.dim();
            let mut perm: Vec<usize> = (0..dim).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
            let w = s.values();
            let permuted = ndarray::Array2::from_shape_fn((dim, dim), |(i, j)| w[[perm[i], perm[j]]]);
            let mut p = s.clone();
            p.replace_values(permuted);
            let a = trace_cheb_vector(&s, 6, 1.0).unwrap();
            let b = trace_cheb_vector(&p, 6, 1.0).unwrap();
            for (x, y) in a.iter().zip(&b) {
                proptest::prop_assert!(close(*x, *y, 1e-10, dim as f64));
            }
        }

        #[test]
        fn scale_covariance(ci in proptest::bool::ANY, n in 2usize..6, seed in 0u64..1000, c in 0.25f64..4.0) {
            let class = if ci { SymmetryClass::Ci } else { SymmetryClass::Diii };
            let s = sample_matrix(class, n, &EntryModel::gaussian(1.0).unwrap(), seed).unwrap();
            let mut scaled = s.clone();
            scaled.replace_values(s.values() * c);
            let a = trace_cheb_vector(&s, 6, 1.0).unwrap();
            let b = trace_cheb_vector(&scaled, 6, c).unwrap();
            for (m, (x, y)) in a.iter().zip(&b).enumerate() {
                let cm = powi(c, m + 1);
                proptest::prop_assert!(close(cm * x, *y, 1e-10, cm * 2.0 * n as f64));
            }
        }
    }
}
