use std::fmt;

use serde::Serialize;

use super::{IndexPair, SymmetryClass};
use crate::{Error, Result};

/// Which off-diagonal block a class lives in: `C1` collects entries of `X1`
/// (and `-X1`), `C2` those of `X2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassKind {
    C1,
    C2,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::C1 => f.write_str("C1"),
            ClassKind::C2 => f.write_str("C2"),
        }
    }
}

/// One block of the entry equivalence relation.
///
/// Every member entry equals `sign * entry(representative)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivClass {
    pub kind: ClassKind,
    /// Unordered base pair, stored with `a <= b`.
    pub base: (usize, usize),
    pub members: Vec<(IndexPair, i8)>,
    pub representative: IndexPair,
}

impl EquivClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn label(&self) -> String {
        format!("{}({},{})", self.kind, self.base.0, self.base.1)
    }
}

/// Result of looking an index pair up in a [`ClassTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// Pair on the diagonal of a skew-symmetric block.
    Zero,
    Member { id: usize, sign: i8 },
}

/// Block/sign decomposition of one matrix position.
///
/// Returns `(kind, a, b, sign)` with `a <= b` such that
/// `entry(p, q) = sign * X_kind[a, b]`, or `None` on a skew diagonal.
fn decompose(class: SymmetryClass, n: usize, pair: IndexPair) -> Option<(ClassKind, usize, usize, i8)> {
    let (lower_row, i) = if pair.p > n { (true, pair.p - n) } else { (false, pair.p) };
    let (right_col, j) = if pair.q > n { (true, pair.q - n) } else { (false, pair.q) };
    let (kind, block_sign) = match (lower_row, right_col) {
        (false, false) => (ClassKind::C1, 1),
        (true, true) => (ClassKind::C1, -1),
        _ => (ClassKind::C2, 1),
    };
    if i == j && class.is_skew() {
        return None;
    }
    let (a, b, sym_sign) = if i <= j {
        (i, j, 1)
    } else if class.is_skew() {
        (j, i, -1)
    } else {
        (j, i, 1)
    };
    Some((kind, a, b, block_sign * sym_sign))
}

fn representative(kind: ClassKind, n: usize, a: usize, b: usize) -> IndexPair {
    match kind {
        ClassKind::C1 => IndexPair::new(a, b),
        ClassKind::C2 => IndexPair::new(n + a, b),
    }
}

fn member_list(kind: ClassKind, n: usize, a: usize, b: usize) -> Vec<IndexPair> {
    let mut pairs = match kind {
        ClassKind::C1 => vec![
            IndexPair::new(a, b),
            IndexPair::new(b, a),
            IndexPair::new(n + a, n + b),
            IndexPair::new(n + b, n + a),
        ],
        ClassKind::C2 => vec![
            IndexPair::new(n + a, b),
            IndexPair::new(n + b, a),
            IndexPair::new(a, n + b),
            IndexPair::new(b, n + a),
        ],
    };
    // a == b collapses the list to two distinct pairs
    let mut seen = Vec::with_capacity(4);
    pairs.retain(|p| {
        if seen.contains(p) {
            false
        } else {
            seen.push(*p);
            true
        }
    });
    pairs
}

/// Equivalence classes of the nonzero index pairs of `[2n]^2`.
///
/// Ordered kind-major (all `C1` first), then lexicographically by base pair.
pub fn build_equivalence_classes(class: SymmetryClass, n: usize) -> Result<Vec<EquivClass>> {
    class.check_n(n)?;
    let mut out = Vec::new();
    for kind in [ClassKind::C1, ClassKind::C2] {
        for a in 1..=n {
            let first_b = if class.is_skew() { a + 1 } else { a };
            for b in first_b..=n {
                let members = member_list(kind, n, a, b)
                    .into_iter()
                    .map(|pair| {
                        let (_, _, _, sign) =
                            decompose(class, n, pair).expect("class members are nonzero");
                        (pair, sign)
                    })
                    .collect();
                out.push(EquivClass {
                    kind,
                    base: (a, b),
                    members,
                    representative: representative(kind, n, a, b),
                });
            }
        }
    }
    Ok(out)
}

/// Dense lookup table `pair -> (class id, sign)` for one `(class, n)`.
#[derive(Debug, Clone)]
pub struct ClassTable {
    class: SymmetryClass,
    n: usize,
    classes: Vec<EquivClass>,
    lookup: Vec<Option<(u32, i8)>>,
}

impl ClassTable {
    pub fn new(class: SymmetryClass, n: usize) -> Result<Self> {
        let classes = build_equivalence_classes(class, n)?;
        let dim = 2 * n;
        let mut lookup = vec![None; dim * dim];
        for (id, c) in classes.iter().enumerate() {
            for &(pair, sign) in &c.members {
                let slot = &mut lookup[pair.flat(dim)];
                if slot.is_some() {
                    return Err(Error::Inconsistent(format!("pair {pair} in two classes")));
                }
                *slot = Some((id as u32, sign));
            }
        }
        Ok(Self {
            class,
            n,
            classes,
            lookup,
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

    pub fn classes(&self) -> &[EquivClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class and sign of `pair` relative to its class representative.
    pub fn class_of(&self, pair: IndexPair) -> Result<Membership> {
        pair.check(self.dim())?;
        Ok(match self.lookup[pair.flat(self.dim())] {
            None => Membership::Zero,
            Some((id, sign)) => Membership::Member {
                id: id as usize,
                sign,
            },
        })
    }

    /// Unchecked lookup by 1-based coordinates, for hot loops.
    #[inline]
    pub(crate) fn get(&self, p: usize, q: usize) -> Option<(u32, i8)> {
        self.lookup[(p - 1) * self.dim() + (q - 1)]
    }

    /// Unchecked lookup by 0-based coordinates.
    #[inline]
    pub(crate) fn get0(&self, p0: usize, q0: usize) -> Option<(u32, i8)> {
        self.lookup[p0 * self.dim() + q0]
    }
}

/// The growth characteristics of the equivalence relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetryStats {
    /// Largest number of pairs equivalent to a single pair.
    pub alpha2: usize,
    /// Number of triples `(p, q, r)`, `p != r`, with `(p, q) ~ (q, r)`.
    pub alpha0_hat: usize,
}

/// Compute `alpha2` and `alpha0_hat` over `[2n]` by exhaustive enumeration.
///
/// Forced-zero pairs count as singleton classes.
pub fn symmetry_stats(class: SymmetryClass, n: usize) -> Result<SymmetryStats> {
    let table = ClassTable::new(class, n)?;
    let dim = table.dim();
    let alpha2 = table
        .classes()
        .iter()
        .map(EquivClass::len)
        .max()
        .unwrap_or(0)
        .max(1);
    let related = |p: usize, q: usize, r: usize, s: usize| -> bool {
        if (p, q) == (r, s) {
            return true;
        }
        match (table.get(p, q), table.get(r, s)) {
            (Some((a, _)), Some((b, _))) => a == b,
            _ => false,
        }
    };
    let mut alpha0_hat = 0;
    for p in 1..=dim {
        for q in 1..=dim {
            for r in 1..=dim {
                if p != r && related(p, q, q, r) {
                    alpha0_hat += 1;
                }
            }
        }
    }
    Ok(SymmetryStats { alpha2, alpha0_hat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn pairs_of(c: &EquivClass) -> BTreeSet<(usize, usize)> {
        c.members.iter().map(|(p, _)| (p.p, p.q)).collect()
    }

    #[test]
    fn diii_n2_has_two_classes_of_four() {
        let classes = build_equivalence_classes(SymmetryClass::Diii, 2).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.len() == 4));
        let c1: BTreeSet<_> = [(1, 2), (2, 1), (3, 4), (4, 3)].into_iter().collect();
        let c2: BTreeSet<_> = [(3, 2), (4, 1), (1, 4), (2, 3)].into_iter().collect();
        assert_eq!(pairs_of(&classes[0]), c1);
        assert_eq!(pairs_of(&classes[1]), c2);
    }

    #[test]
    fn diii_n1_is_degenerate() {
        assert!(matches!(
            build_equivalence_classes(SymmetryClass::Diii, 1),
            Err(Error::DegenerateSpace { n: 1 })
        ));
    }

    #[test]
    fn ci_n1_has_two_diagonal_classes() {
        let classes = build_equivalence_classes(SymmetryClass::Ci, 1).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.len() == 2));
        assert_eq!(pairs_of(&classes[0]), [(1, 1), (2, 2)].into_iter().collect());
        assert_eq!(pairs_of(&classes[1]), [(2, 1), (1, 2)].into_iter().collect());
    }

    #[test]
    fn class_counts_match_enumeration() {
        for n in 2..=6 {
            // brute force: count distinct (kind, unordered base) over all nonzero positions
            for class in SymmetryClass::ALL {
                let mut bases = BTreeSet::new();
                for p in 1..=2 * n {
                    for q in 1..=2 * n {
                        if let Some((k, a, b, _)) = decompose(class, n, IndexPair::new(p, q)) {
                            bases.insert((k, a, b));
                        }
                    }
                }
                let expected = match class {
                    SymmetryClass::Diii => n * (n - 1),
                    SymmetryClass::Ci => n * (n - 1) + 2 * n,
                };
                assert_eq!(bases.len(), expected);
                assert_eq!(build_equivalence_classes(class, n).unwrap().len(), expected);
            }
        }
    }

    #[test]
    fn signs_relative_to_representative() {
        let n = 4;
        let diii = ClassTable::new(SymmetryClass::Diii, n).unwrap();
        let ci = ClassTable::new(SymmetryClass::Ci, n).unwrap();
        let (a, b) = (1, 3);
        let sign = |t: &ClassTable, p, q| match t.class_of(IndexPair::new(p, q)).unwrap() {
            Membership::Member { sign, .. } => sign,
            Membership::Zero => 0,
        };
        assert_eq!(sign(&diii, a, b), 1);
        assert_eq!(sign(&diii, b, a), -1);
        assert_eq!(sign(&diii, n + a, n + b), -1);
        assert_eq!(sign(&diii, n + b, n + a), 1);
        assert_eq!(sign(&ci, b, a), 1);
        assert_eq!(sign(&ci, n + a, n + b), -1);
        assert_eq!(sign(&ci, n + a, b), 1);
        assert_eq!(sign(&ci, b, n + a), 1);
    }

    #[test]
    fn zero_exactly_on_skew_diagonals() {
        let n = 3;
        let t = ClassTable::new(SymmetryClass::Diii, n).unwrap();
        for p in 1..=2 * n {
            for q in 1..=2 * n {
                let on_block_diag = p == q || p == q + n || q == p + n;
                let zero = t.class_of(IndexPair::new(p, q)).unwrap() == Membership::Zero;
                assert_eq!(zero, on_block_diag, "({p},{q})");
            }
        }
        assert!(t.class_of(IndexPair::new(0, 1)).is_err());
        assert!(t.class_of(IndexPair::new(1, 7)).is_err());
    }

    #[test]
    fn partition_covers_nonzero_pairs() {
        for n in 1..=8 {
            for class in SymmetryClass::ALL {
                let Ok(t) = ClassTable::new(class, n) else {
                    assert_eq!((class, n), (SymmetryClass::Diii, 1));
                    continue;
                };
                let covered: usize = t.classes().iter().map(EquivClass::len).sum();
                let zeros = if class.is_skew() { 4 * n } else { 0 };
                assert_eq!(covered + zeros, 4 * n * n);
                for c in t.classes() {
                    let rep = t.class_of(c.representative).unwrap();
                    assert!(matches!(rep, Membership::Member { sign: 1, .. }));
                }
            }
        }
    }

    #[test]
    fn base_pair_is_unordered() {
        let n = 5;
        for kind in [ClassKind::C1, ClassKind::C2] {
            let ab: BTreeSet<_> = member_list(kind, n, 2, 4).into_iter().collect();
            let ba: BTreeSet<_> = member_list(kind, n, 4, 2).into_iter().collect();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn symmetry_constants() {
        for n in 2..=8 {
            for class in SymmetryClass::ALL {
                let s = symmetry_stats(class, n).unwrap();
                assert_eq!(s, SymmetryStats { alpha2: 4, alpha0_hat: 0 });
            }
        }
        let s = symmetry_stats(SymmetryClass::Ci, 1).unwrap();
        assert_eq!(s, SymmetryStats { alpha2: 2, alpha0_hat: 0 });
    }
}
