use serde::Serialize;

use super::delta::{check_domino, DeltaMatrix, DominoMode};
use crate::budget::saturating_pow;
use crate::{Budget, Error, Result};

/// Arrangement of the scalar pair `(a, b)` inside a pattern entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LambdaKind {
    /// Aligned: `(a b / a b)`.
    A,
    /// Reversed: `(a b / b a)`.
    R,
}

impl LambdaKind {
    pub fn matrix(self, a: usize, b: usize) -> [[usize; 2]; 2] {
        match self {
            LambdaKind::A => [[a, b], [a, b]],
            LambdaKind::R => [[a, b], [b, a]],
        }
    }
}

/// A sequence `(Delta_l, Lambda_l)`, `l = 1..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Pattern {
    seq: Vec<(DeltaMatrix, LambdaKind)>,
}

impl Pattern {
    pub fn new(seq: Vec<(DeltaMatrix, LambdaKind)>) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::InvalidParameter("pattern needs m >= 1".into()));
        }
        for (d, _) in &seq {
            d.check()?;
        }
        Ok(Self { seq })
    }

    /// Same lambda kind at every position.
    pub fn uniform(deltas: &[DeltaMatrix], kind: LambdaKind) -> Result<Self> {
        Self::new(deltas.iter().map(|&d| (d, kind)).collect())
    }

    pub fn m(&self) -> usize {
        self.seq.len()
    }

    pub fn entries(&self) -> &[(DeltaMatrix, LambdaKind)] {
        &self.seq
    }

    pub fn deltas(&self) -> Vec<DeltaMatrix> {
        self.seq.iter().map(|e| e.0).collect()
    }

    /// Realize `n * Delta_l + Lambda_l(a_l, b_l)`; requires `a_l != b_l`.
    pub fn instantiate(&self, n: usize, scalars: &[(usize, usize)]) -> Result<Instance> {
        if scalars.len() != self.m() {
            return Err(Error::ShapeMismatch(format!(
                "{} scalar pairs for a pattern of length {}",
                scalars.len(),
                self.m()
            )));
        }
        let mut realized = Vec::with_capacity(self.m());
        for (&(d, kind), &(a, b)) in self.seq.iter().zip(scalars) {
            if a == b || a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidParameter(format!(
                    "scalars ({a}, {b}) must be distinct elements of [1, {n}]"
                )));
            }
            realized.push(realize(n, d, kind, a, b));
        }
        Ok(Instance {
            pattern: self.clone(),
            scalars: scalars.to_vec(),
            realized,
        })
    }
}

fn realize(n: usize, d: DeltaMatrix, kind: LambdaKind, a: usize, b: usize) -> [[usize; 2]; 2] {
    let lam = kind.matrix(a, b);
    [
        [n * d.alpha as usize + lam[0][0], n * d.beta as usize + lam[0][1]],
        [n * d.gamma as usize + lam[1][0], n * d.delta as usize + lam[1][1]],
    ]
}

/// A realized pattern: index matrices `(p1 q1 / p2 q2)` per position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub pattern: Pattern,
    pub scalars: Vec<(usize, usize)>,
    pub realized: Vec<[[usize; 2]; 2]>,
}

impl Instance {
    /// Consistency of both rows.
    ///
    /// `Forward`: each row is a closed walk read left to right,
    /// `p_{i,l+1} = q_{i,l}`. `Reverse`: the lower row is read right to left,
    /// `p_{2,l} = q_{2,l+1}` (the reading under a reflection).
    pub fn is_consistent(&self, reading: DominoMode) -> bool {
        let m = self.realized.len();
        (0..m).all(|l| {
            let cur = &self.realized[l];
            let next = &self.realized[(l + 1) % m];
            let upper = next[0][0] == cur[0][1];
            let lower = match reading {
                DominoMode::Forward => next[1][0] == cur[1][1],
                DominoMode::Reverse => cur[1][0] == next[1][1],
            };
            upper && lower
        })
    }
}

/// Number of consistent instances with both rows read forward.
pub fn count_consistent_instances(pattern: &Pattern, n: usize, budget: Budget) -> Result<u64> {
    count_instances(pattern, n, DominoMode::Forward, budget)
}

/// Exhaustive count of scalar choices `(a_l, b_l)`, `a_l != b_l`, whose
/// instance is consistent under `reading`.
///
/// Depth-first over positions, pruning on the link to the previous position;
/// budget is charged `n^(m + 2)`.
pub fn count_instances(
    pattern: &Pattern,
    n: usize,
    reading: DominoMode,
    budget: Budget,
) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidParameter("instances need n >= 2".into()));
    }
    let m = pattern.m();
    budget.check("consistent instances", saturating_pow(n as u128, m as u32 + 2))?;
    let entries = pattern.entries();
    let scalars: Vec<(usize, usize)> = (1..=n)
        .flat_map(|a| (1..=n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();

    let links = |cur: &[[usize; 2]; 2], next: &[[usize; 2]; 2]| -> bool {
        next[0][0] == cur[0][1]
            && match reading {
                DominoMode::Forward => next[1][0] == cur[1][1],
                DominoMode::Reverse => cur[1][0] == next[1][1],
            }
    };

    fn dfs(
        l: usize,
        path: &mut Vec<[[usize; 2]; 2]>,
        ctx: &(
            &[(DeltaMatrix, LambdaKind)],
            &[(usize, usize)],
            usize,
            &dyn Fn(&[[usize; 2]; 2], &[[usize; 2]; 2]) -> bool,
        ),
    ) -> u64 {
        let (entries, scalars, n, links) = *ctx;
        let m = entries.len();
        if l == m {
            return u64::from(links(&path[m - 1], &path[0]));
        }
        let (d, kind) = entries[l];
        let mut total = 0;
        for &(a, b) in scalars {
            let r = realize(n, d, kind, a, b);
            if l > 0 && !links(&path[l - 1], &r) {
                continue;
            }
            path.push(r);
            total += dfs(l + 1, path, ctx);
            path.pop();
        }
        total
    }

    let mut path = Vec::with_capacity(m);
    Ok(dfs(0, &mut path, &(entries, &scalars, n, &links)))
}

/// Substantiality test for a pattern whose deltas satisfy a domino condition.
///
/// With the forward condition the pattern is substantial iff every lambda is
/// aligned; otherwise, with the reverse condition, iff every lambda is
/// reversed (rows then read as under a reflection). When both conditions
/// hold the forward reading is used.
pub fn is_substantial(pattern: &Pattern) -> Result<bool> {
    let deltas = pattern.deltas();
    if check_domino(&deltas, DominoMode::Forward) {
        is_substantial_under(pattern, DominoMode::Forward)
    } else if check_domino(&deltas, DominoMode::Reverse) {
        is_substantial_under(pattern, DominoMode::Reverse)
    } else {
        Err(Error::LemmaInapplicable)
    }
}

/// Substantiality under an explicit reading.
pub fn is_substantial_under(pattern: &Pattern, reading: DominoMode) -> Result<bool> {
    if !check_domino(&pattern.deltas(), reading) {
        return Err(Error::LemmaInapplicable);
    }
    let required = match reading {
        DominoMode::Forward => LambdaKind::A,
        DominoMode::Reverse => LambdaKind::R,
    };
    Ok(pattern.entries().iter().all(|&(_, k)| k == required))
}
