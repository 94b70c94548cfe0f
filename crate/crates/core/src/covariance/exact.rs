use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::multiindex::{for_each_good, GoodRule};
use crate::budget::saturating_pow;
use crate::ensemble::{ClassTable, EntryModel, SymmetryClass};
use crate::numeric::powi;
use crate::patterns::dihedral_group;
use crate::{Budget, Error, Result};

/// Contribution of one dihedral element to the finite-n variance.
#[derive(Debug, Clone, Serialize)]
pub struct PerGTerm {
    pub element: String,
    pub reflection: bool,
    /// Size of the good set.
    pub count: u64,
    /// Sum over the good set of the member-sign products.
    pub sign_sum: i64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VnBreakdown {
    pub class: SymmetryClass,
    pub n: usize,
    pub m: usize,
    pub rule: GoodRule,
    pub value: f64,
    /// Empty for `m < 3`.
    pub per_g: Vec<PerGTerm>,
}

/// Finite-n variance of `Tr T_m` predicted by the pair-partition formula.
pub fn v_n_exact(class: SymmetryClass, n: usize, m: usize, model: &EntryModel, budget: Budget) -> Result<f64> {
    Ok(v_n_breakdown(class, n, m, model, GoodRule::Equality, budget)?.value)
}

/// [`v_n_exact`] with the per-element split and a choice of good-set rule.
///
/// * `m = 1`: `(2n)^-1 sum over equivalent diagonal pairs of E(a(p,p) a(q,q))`,
/// * `m = 2`: `(2n)^-2 sum over equivalent off-diagonal pairs of Cov(|a|^2, |a|^2)`,
/// * `m >= 3`: `(2n)^-m sum over g, over the good set of g, of
///   prod_l E(a(P_{1,l}) a(P_{2,g(l)}))`.
pub fn v_n_breakdown(
    class: SymmetryClass,
    n: usize,
    m: usize,
    model: &EntryModel,
    rule: GoodRule,
    budget: Budget,
) -> Result<VnBreakdown> {
    if m == 0 {
        return Err(Error::InvalidParameter("degree m must be >= 1".into()));
    }
    let table = ClassTable::new(class, n)?;
    let dim = table.dim();
    let sigma2 = model.sigma2();
    let e_sq = class.square_sign() * sigma2;
    let mut per_g = Vec::new();
    let value = match m {
        1 => {
            let mut total = 0i64;
            for c in table.classes() {
                let diag: i64 = c
                    .members
                    .iter()
                    .filter(|(pr, _)| pr.p == pr.q)
                    .map(|&(_, s)| i64::from(s))
                    .sum();
                total += diag * diag;
            }
            total as f64 * e_sq / dim as f64
        }
        2 => {
            let pairs: u64 = table
                .classes()
                .iter()
                .map(|c| {
                    let k = c.members.iter().filter(|(pr, _)| pr.p != pr.q).count() as u64;
                    k * k
                })
                .sum();
            pairs as f64 * model.var_abs_sq() / (dim * dim) as f64
        }
        _ => {
            budget.check(
                "good multi-indices",
                saturating_pow(dim as u128, m as u32).saturating_mul(2 * m as u128),
            )?;
            let group = dihedral_group(m)?;
            let ng = group.len();
            let (counts, sums) = (0..dim)
                .into_par_iter()
                .map(|first| {
                    let mut counts = vec![0u64; ng];
                    let mut sums = vec![0i64; ng];
                    for_each_good(&table, &group, rule, Some(first), &mut |gi| {
                        counts[gi.g] += 1;
                        sums[gi.g] += gi.sign;
                    });
                    (counts, sums)
                })
                .reduce(
                    || (vec![0; ng], vec![0; ng]),
                    |(mut c, mut s), (c2, s2)| {
                        c.iter_mut().zip(c2).for_each(|(a, b)| *a += b);
                        s.iter_mut().zip(s2).for_each(|(a, b)| *a += b);
                        (c, s)
                    },
                );
            let scale = powi(e_sq / dim as f64, m);
            for (gi, g) in group.iter().enumerate() {
                per_g.push(PerGTerm {
                    element: g.to_string(),
                    reflection: g.is_reflection(),
                    count: counts[gi],
                    sign_sum: sums[gi],
                    value: sums[gi] as f64 * scale,
                });
            }
            sums.iter().sum::<i64>() as f64 * scale
        }
    };
    Ok(VnBreakdown {
        class,
        n,
        m,
        rule,
        value,
        per_g,
    })
}

/// Whether an asymptotic value is a stated limit or one derived here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueFlag {
    Theorem,
    Derived,
}

impl fmt::Display for ValueFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueFlag::Theorem => "theorem",
            ValueFlag::Derived => "derived",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptotic {
    pub value: f64,
    pub flag: ValueFlag,
}

/// Limiting variance of `Tr T_m(X, sigma)`, identical for both classes.
///
/// `0` for `m = 1` and odd `m >= 3`, `4 m sigma^(2m)` for even `m >= 4`.
/// For `m = 2` the value `4 Var(|a|^2)` is the limit of [`v_n_exact`] and
/// carries [`ValueFlag::Derived`].
pub fn v_asymptotic(m: usize, model: &EntryModel) -> Result<Asymptotic> {
    let sigma2 = model.sigma2();
    let (value, flag) = match m {
        0 => return Err(Error::InvalidParameter("degree m must be >= 1".into())),
        1 => (0.0, ValueFlag::Theorem),
        2 => (4.0 * model.var_abs_sq(), ValueFlag::Derived),
        m if m % 2 == 1 => (0.0, ValueFlag::Theorem),
        m => (4.0 * m as f64 * powi(sigma2, m), ValueFlag::Theorem),
    };
    Ok(Asymptotic { value, flag })
}

#[derive(Debug, Clone, Serialize)]
pub struct CovRow {
    pub m: usize,
    pub v_n_exact: f64,
    pub v_asymptotic: f64,
    pub flag: ValueFlag,
    pub gap: f64,
    pub per_g: Vec<PerGTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CovReport {
    pub class: SymmetryClass,
    pub n: usize,
    pub rule: GoodRule,
    pub rows: Vec<CovRow>,
}

pub fn cov_report(
    class: SymmetryClass,
    n: usize,
    degrees: &[usize],
    model: &EntryModel,
    rule: GoodRule,
    budget: Budget,
) -> Result<CovReport> {
    let rows = degrees
        .iter()
        .map(|&m| {
            let exact = v_n_breakdown(class, n, m, model, rule, budget)?;
            let asym = v_asymptotic(m, model)?;
            Ok(CovRow {
                m,
                v_n_exact: exact.value,
                v_asymptotic: asym.value,
                flag: asym.flag,
                gap: (exact.value - asym.value).abs(),
                per_g: exact.per_g,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CovReport { class, n, rule, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::IndexPair;

    fn gauss() -> EntryModel {
        EntryModel::gaussian(1.0).unwrap()
    }

    #[test]
    fn first_degree_vanishes() {
        for n in 1..=6 {
            assert_eq!(v_n_exact(SymmetryClass::Ci, n, 1, &gauss(), Budget::default()).unwrap(), 0.0);
            if n >= 2 {
                assert_eq!(v_n_exact(SymmetryClass::Diii, n, 1, &gauss(), Budget::default()).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn second_degree_literal_sum() {
        for class in SymmetryClass::ALL {
            for n in 2..=6 {
                let table = ClassTable::new(class, n).unwrap();
                let dim = 2 * n;
                // literal double sum over ordered off-diagonal pairs
                let mut count = 0u64;
                for p in 1..=dim {
                    for q in (1..=dim).filter(|&q| q != p) {
                        for r in 1..=dim {
                            for s in (1..=dim).filter(|&s| s != r) {
                                let a = table.class_of(IndexPair::new(p, q)).unwrap();
                                let b = table.class_of(IndexPair::new(r, s)).unwrap();
                                if let (
                                    crate::ensemble::Membership::Member { id: x, .. },
                                    crate::ensemble::Membership::Member { id: y, .. },
                                ) = (a, b)
                                {
                                    count += u64::from(x == y);
                                }
                            }
                        }
                    }
                }
                let literal = count as f64 * 2.0 / (dim * dim) as f64;
                let v = v_n_exact(class, n, 2, &gauss(), Budget::default()).unwrap();
                assert!((v - literal).abs() < 1e-12);
                let nf = n as f64;
                let closed = match class {
                    SymmetryClass::Diii => 8.0 * (nf - 1.0) / nf,
                    SymmetryClass::Ci => 2.0 * (4.0 - 3.0 / nf),
                };
                assert!((v - closed).abs() < 1e-12, "{class} n={n}: {v} vs {closed}");
            }
        }
    }

    #[test]
    fn per_g_sums_to_total() {
        for class in SymmetryClass::ALL {
            let b = v_n_breakdown(class, 3, 4, &gauss(), GoodRule::Equality, Budget::default()).unwrap();
            assert_eq!(b.per_g.len(), 8);
            let s: f64 = b.per_g.iter().map(|t| t.value).sum();
            assert!((s - b.value).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptotic_table() {
        let g = gauss();
        assert_eq!(v_asymptotic(4, &g).unwrap(), Asymptotic { value: 16.0, flag: ValueFlag::Theorem });
        assert_eq!(v_asymptotic(5, &g).unwrap().value, 0.0);
        assert_eq!(v_asymptotic(1, &g).unwrap().value, 0.0);
        assert_eq!(v_asymptotic(2, &g).unwrap(), Asymptotic { value: 8.0, flag: ValueFlag::Derived });
        let g2 = EntryModel::gaussian(2.0).unwrap();
        assert_eq!(v_asymptotic(6, &g2).unwrap().value, 24.0 * 64.0);
        assert_eq!(v_asymptotic(2, &EntryModel::rademacher(1.0).unwrap()).unwrap().value, 0.0);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            v_n_exact(SymmetryClass::Diii, 20, 8, &gauss(), Budget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
