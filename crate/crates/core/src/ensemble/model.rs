use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Law of the real draw `g` behind a representative entry.
///
/// The representative entry is `g` itself for CI and `i * g` for DIII.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Gaussian,
    Rademacher,
    /// Finite support `(value, probability)`, already centered.
    Atoms(Vec<(f64, f64)>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Rademacher => "rademacher",
            Family::Atoms(_) => "atoms",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Atoms(atoms) => {
                f.write_str("atoms:")?;
                for (i, (v, p)) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "({v},{p})")?;
                }
                Ok(())
            }
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `gaussian`, `rademacher`, or `atoms:(v1,p1),(v2,p2),...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => return Ok(Family::Gaussian),
            "rademacher" => return Ok(Family::Rademacher),
            _ => {}
        }
        let Some(list) = s.strip_prefix("atoms:") else {
            return Err(Error::InvalidParameter(format!("unknown family '{s}'")));
        };
        let bad = || Error::InvalidParameter(format!("malformed atom list '{list}'"));
        let mut atoms = Vec::new();
        let mut rest = list.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = inner.find(')').ok_or_else(bad)?;
            let (body, tail) = inner.split_at(close);
            let (v, p) = body.split_once(',').ok_or_else(bad)?;
            let v: f64 = v.trim().parse().map_err(|_| bad())?;
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            atoms.push((v, p));
            rest = tail[1..].trim_start();
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        }
        if atoms.is_empty() {
            return Err(bad());
        }
        Ok(Family::Atoms(atoms))
    }
}

/// Entry law: a centered real family with variance `sigma2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryModel {
    sigma2: f64,
    family: Family,
}

impl EntryModel {
    pub fn gaussian(sigma2: f64) -> Result<Self> {
        Self::new(Family::Gaussian, sigma2)
    }

    pub fn rademacher(sigma2: f64) -> Result<Self> {
        Self::new(Family::Rademacher, sigma2)
    }

    /// Finite-support law; `sigma2` is implied by the atoms.
    pub fn atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let sigma2 = atoms.iter().map(|(v, p)| p * v * v).sum();
        Self::new(Family::Atoms(atoms), sigma2)
    }

    pub fn new(family: Family, sigma2: f64) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma2 must be positive and finite, got {sigma2}"
            )));
        }
        if let Family::Atoms(atoms) = &family {
            if atoms.iter().any(|&(v, p)| !v.is_finite() || !(p > 0.0)) {
                return Err(Error::InvalidParameter(
                    "atoms need finite values and positive probabilities".into(),
                ));
            }
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let mean: f64 = atoms.iter().map(|(v, p)| v * p).sum();
            let var: f64 = atoms.iter().map(|(v, p)| p * v * v).sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "atom probabilities sum to {total}, not 1"
                )));
            }
            if mean.abs() > 1e-12 * var.sqrt().max(1.0) {
                return Err(Error::InvalidParameter(format!("atoms not centered (mean {mean})")));
            }
            if (var - sigma2).abs() > 1e-12 * sigma2.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "atoms have variance {var}, but sigma2 = {sigma2}"
                )));
            }
        }
        Ok(Self { sigma2, family })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Full atom list when the law has finite support.
    pub fn support(&self) -> Option<Vec<(f64, f64)>> {
        match &self.family {
            Family::Gaussian => None,
            Family::Rademacher => {
                let s = self.sigma();
                Some(vec![(-s, 0.5), (s, 0.5)])
            }
            Family::Atoms(atoms) => Some(atoms.clone()),
        }
    }

    /// `E[g^k]` of the real draw.
    pub fn raw_moment(&self, k: usize) -> f64 {
        match &self.family {
            Family::Gaussian => {
                if k % 2 == 1 {
                    0.0
                } else {
                    // sigma^k (k-1)!!
                    let mut dfact = 1.0;
                    let mut j = 1;
                    while j < k {
                        dfact *= j as f64;
                        j += 2;
                    }
                    crate::numeric::powi(self.sigma(), k) * dfact
                }
            }
            Family::Rademacher => {
                if k % 2 == 1 {
                    0.0
                } else {
                    crate::numeric::powi(self.sigma2, k / 2)
                }
            }
            Family::Atoms(atoms) => atoms
                .iter()
                .map(|&(v, p)| p * crate::numeric::powi(v, k))
                .sum(),
        }
    }

    /// `Var(|a|^2) = E g^4 - sigma^4`.
    pub fn var_abs_sq(&self) -> f64 {
        self.raw_moment(4) - self.sigma2 * self.sigma2
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.family {
            Family::Gaussian => {
                let z: f64 = rng.sample(StandardNormal);
                z * self.sigma()
            }
            Family::Rademacher => {
                if rng.random::<bool>() {
                    self.sigma()
                } else {
                    -self.sigma()
                }
            }
            Family::Atoms(atoms) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(v, p) in atoms {
                    acc += p;
                    if u < acc {
                        return v;
                    }
                }
                atoms.last().map(|a| a.0).unwrap_or(0.0)
            }
        }
    }
}
