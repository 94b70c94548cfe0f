use std::collections::HashMap;

use crate::budget::saturating_pow;
use crate::chebyshev::{cheb_coefficients, trace_cheb_vector};
use crate::ensemble::{ClassTable, EntryModel, MatrixSample, SymmetryClass};
use crate::numeric::CompensatedSum;
use crate::{Budget, Error, Result};

/// Covariance matrix of `(Tr T_1, ..., Tr T_M)` computed by enumerating every
/// joint assignment of the class variables of a finite-support model.
///
/// Entry `[i][j]` is `Cov(Tr T_{i+1}, Tr T_{j+1})`.
pub fn config_oracle_matrix(
    class: SymmetryClass,
    n: usize,
    max_degree: usize,
    model: &EntryModel,
    budget: Budget,
) -> Result<Vec<Vec<f64>>> {
    let atoms = model.support().ok_or_else(|| {
        Error::InvalidParameter(format!("configuration oracle needs a finite-support law, got {}", model.family()))
    })?;
    if max_degree == 0 {
        return Err(Error::InvalidParameter("max degree must be >= 1".into()));
    }
    let table = ClassTable::new(class, n)?;
    let classes = table.len();
    let total = saturating_pow(atoms.len() as u128, classes as u32);
    budget.check("configurations", total)?;
    let sigma = model.sigma();
    let big_m = max_degree;

    let each_config = |f: &mut dyn FnMut(f64, &[f64]) -> Result<()>| -> Result<()> {
        let mut digits = vec![0usize; classes];
        let mut draws = vec![0.0; classes];
        for _ in 0..total {
            let mut weight = 1.0;
            for (&i, slot) in digits.iter().zip(draws.iter_mut()) {
                *slot = atoms[i].0;
                weight *= atoms[i].1;
            }
            let sample = MatrixSample::from_class_draws(&table, &draws)?;
            let traces = trace_cheb_vector(&sample, big_m, sigma)?;
            f(weight, &traces)?;
            for d in digits.iter_mut() {
                *d += 1;
                if *d < atoms.len() {
                    break;
                }
                *d = 0;
            }
        }
        Ok(())
    };

    let mut mean_acc: Vec<CompensatedSum> = vec![CompensatedSum::new(); big_m];
    each_config(&mut |w, t| {
        for (acc, &x) in mean_acc.iter_mut().zip(t) {
            acc.add(w * x);
        }
        Ok(())
    })?;
    let mean: Vec<f64> = mean_acc.iter().map(|a| a.value()).collect();

    let mut cov_acc = vec![vec![CompensatedSum::new(); big_m]; big_m];
    each_config(&mut |w, t| {
        for i in 0..big_m {
            let di = t[i] - mean[i];
            for j in i..big_m {
                cov_acc[i][j].add(w * di * (t[j] - mean[j]));
            }
        }
        Ok(())
    })?;
    let mut cov = vec![vec![0.0; big_m]; big_m];
    for i in 0..big_m {
        for j in i..big_m {
            let v = cov_acc[i][j].value();
            cov[i][j] = v;
            cov[j][i] = v;
        }
    }
    Ok(cov)
}

/// `Cov(Tr T_m, Tr T_mu)` by exhaustive enumeration of configurations.
pub fn cov_traces_config_oracle(
    class: SymmetryClass,
    n: usize,
    m: usize,
    mu: usize,
    model: &EntryModel,
    budget: Budget,
) -> Result<f64> {
    if m == 0 || mu == 0 {
        return Ok(0.0);
    }
    let cov = config_oracle_matrix(class, n, m.max(mu), model, budget)?;
    Ok(cov[m - 1][mu - 1])
}

/// Monomial in the class variables: sorted `(class id, exponent)`.
type Monomial = Vec<(u32, u32)>;

/// Exact trace covariances from the multi-index expansion of `Tr X^k`.
///
/// `Tr X^k` is expanded as an integer polynomial in the class variables, one
/// term per consistent index cycle, with the member signs folded into the
/// coefficients. Covariances of monomials factor over classes and use the
/// raw moments of the entry law.
pub struct MomentOracle {
    class: SymmetryClass,
    n: usize,
    model: EntryModel,
    table: ClassTable,
    budget: Budget,
    polys: HashMap<usize, HashMap<Monomial, i64>>,
}

impl MomentOracle {
    pub fn new(class: SymmetryClass, n: usize, model: EntryModel, budget: Budget) -> Result<Self> {
        Ok(Self {
            class,
            n,
            table: ClassTable::new(class, n)?,
            model,
            budget,
            polys: HashMap::new(),
        })
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Integer polynomial of `sum over cycles of prod_l s_l g_{c_l}`, without
    /// normalization or phase.
    fn poly(&mut self, k: usize) -> Result<&HashMap<Monomial, i64>> {
        if !self.polys.contains_key(&k) {
            let dim = self.table.dim();
            self.budget.check("trace expansion", saturating_pow(dim as u128, k as u32))?;
            let mut poly: HashMap<Monomial, i64> = HashMap::new();
            let mut path = vec![0usize; k];
            let mut vars: Vec<u32> = Vec::with_capacity(k);
            expand(&self.table, k, 0, 1, &mut path, &mut vars, &mut poly);
            poly.retain(|_, c| *c != 0);
            self.polys.insert(k, poly);
        }
        Ok(&self.polys[&k])
    }

    /// `Cov(Tr X^k1, Tr X^k2)`.
    pub fn power_cov(&mut self, k1: usize, k2: usize) -> Result<f64> {
        if k1 == 0 || k2 == 0 {
            return Ok(0.0);
        }
        let k = k1 + k2;
        let moments: Vec<f64> = (0..=k).map(|j| self.model.raw_moment(j)).collect();
        let expect = |mono: &[(u32, u32)]| -> f64 { mono.iter().map(|&(_, e)| moments[e as usize]).product() };
        self.poly(k1)?;
        self.poly(k2)?;
        let p1 = &self.polys[&k1];
        let p2 = &self.polys[&k2];

        // class id -> monomials of p2 containing it
        let mut index: HashMap<u32, Vec<usize>> = HashMap::new();
        let mut p2v: Vec<(&Monomial, i64)> = p2.iter().map(|(m, &c)| (m, c)).collect();
        p2v.sort();
        for (i, (mono, _)) in p2v.iter().enumerate() {
            for &(v, _) in mono.iter() {
                index.entry(v).or_default().push(i);
            }
        }
        let mut total = CompensatedSum::new();
        let mut stamp = vec![usize::MAX; p2v.len()];
        let mut terms: Vec<(&Monomial, i64)> = p1.iter().map(|(m, &c)| (m, c)).collect();
        terms.sort();
        for (u_idx, (u, cu)) in terms.iter().enumerate() {
            let eu = expect(u);
            for &(v, _) in u.iter() {
                let Some(list) = index.get(&v) else { continue };
                for &j in list {
                    if stamp[j] == u_idx {
                        continue;
                    }
                    stamp[j] = u_idx;
                    let (w, cw) = p2v[j];
                    let joint = expect(&merge(u, w));
                    total.add((*cu * cw) as f64 * (joint - eu * expect(w)));
                }
            }
        }
        let raw = total.value();
        let norm = (self.table.dim() as f64).powf(-(k as f64) / 2.0);
        let phase = match self.class {
            SymmetryClass::Ci => 1.0,
            SymmetryClass::Diii => {
                if k % 2 == 1 {
                    if raw.abs() > 1e-9 {
                        return Err(Error::Inconsistent(format!(
                            "odd total degree {k} left a real covariance {raw}"
                        )));
                    }
                    return Ok(0.0);
                }
                if (k / 2) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        Ok(phase * norm * raw)
    }

    /// `Cov(Tr T_m, Tr T_mu)` with `sigma` taken from the entry law.
    pub fn cheb_cov(&mut self, m: usize, mu: usize) -> Result<f64> {
        let sigma = self.model.sigma();
        let a = cheb_coefficients(m, sigma)?.power_coefficients();
        let b = cheb_coefficients(mu, sigma)?.power_coefficients();
        let mut total = CompensatedSum::new();
        for (k, &ak) in a.iter().enumerate().skip(1) {
            if ak == 0.0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().skip(1) {
                if bj == 0.0 {
                    continue;
                }
                total.add(ak * bj * self.power_cov(k, j)?);
            }
        }
        Ok(total.value())
    }
}

fn expand(
    table: &ClassTable,
    k: usize,
    l: usize,
    sign: i64,
    path: &mut [usize],
    vars: &mut Vec<u32>,
    poly: &mut HashMap<Monomial, i64>,
) {
    let dim = table.dim();
    if l == k {
        let Some((c, s)) = table.get0(path[k - 1], path[0]) else {
            return;
        };
        let mut all = vars.clone();
        all.push(c);
        all.sort_unstable();
        let mut mono: Monomial = Vec::new();
        for v in all {
            match mono.last_mut() {
                Some((last, e)) if *last == v => *e += 1,
                _ => mono.push((v, 1)),
            }
        }
        *poly.entry(mono).or_insert(0) += sign * i64::from(s);
        return;
    }
    for p in 0..dim {
        let mut next_sign = sign;
        if l > 0 {
            let Some((c, s)) = table.get0(path[l - 1], p) else {
                continue;
            };
            vars.push(c);
            next_sign *= i64::from(s);
        }
        path[l] = p;
        expand(table, k, l + 1, next_sign, path, vars, poly);
        if l > 0 {
            vars.pop();
        }
    }
}

fn merge(a: &[(u32, u32)], b: &[(u32, u32)]) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// `Cov(Tr T_m, Tr T_mu)` from the moment expansion.
pub fn cov_traces_moment_oracle(
    class: SymmetryClass,
    n: usize,
    m: usize,
    mu: usize,
    model: &EntryModel,
    budget: Budget,
) -> Result<f64> {
    MomentOracle::new(class, n, model.clone(), budget)?.cheb_cov(m, mu)
}
