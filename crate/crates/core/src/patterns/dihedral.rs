use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// `gamma^nu` or `tau gamma^nu` (apply `gamma^nu` first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DihedralKind {
    Shift(usize),
    Reflection(usize),
}

/// Element of the dihedral group generated by the cycle
/// `gamma = (1 2 ... m)` and the reversal `tau: l -> m + 1 - l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DihedralElement {
    m: usize,
    kind: DihedralKind,
    /// `images[l - 1] = g(l)`, 1-based.
    images: Vec<usize>,
}

impl DihedralElement {
    pub fn new(m: usize, kind: DihedralKind) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("dihedral group needs m >= 1".into()));
        }
        let nu = match kind {
            DihedralKind::Shift(nu) | DihedralKind::Reflection(nu) => nu % m,
        };
        let images = (1..=m)
            .map(|l| {
                let shifted = (l - 1 + nu) % m + 1;
                match kind {
                    DihedralKind::Shift(_) => shifted,
                    DihedralKind::Reflection(_) => m + 1 - shifted,
                }
            })
            .collect();
        let kind = match kind {
            DihedralKind::Shift(_) => DihedralKind::Shift(nu),
            DihedralKind::Reflection(_) => DihedralKind::Reflection(nu),
        };
        Ok(Self { m, kind, images })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(m, DihedralKind::Shift(0))
    }

    pub fn gamma(m: usize) -> Result<Self> {
        Self::new(m, DihedralKind::Shift(1))
    }

    pub fn tau(m: usize) -> Result<Self> {
        Self::new(m, DihedralKind::Reflection(0))
    }

    /// Recover the element from its permutation, if it is dihedral.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let m = images.len();
        (0..m)
            .flat_map(|nu| [DihedralKind::Shift(nu), DihedralKind::Reflection(nu)])
            .filter_map(|k| Self::new(m, k).ok())
            .find(|g| g.images == images)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> DihedralKind {
        self.kind
    }

    pub fn is_reflection(&self) -> bool {
        matches!(self.kind, DihedralKind::Reflection(_))
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `g(l)` for 1-based `l`.
    pub fn apply(&self, l: usize) -> usize {
        self.images[l - 1]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::ShapeMismatch(format!("D_{} vs D_{}", 2 * self.m, 2 * other.m)));
        }
        let images: Vec<usize> = other.images.iter().map(|&l| self.apply(l)).collect();
        Self::from_images(&images)
            .ok_or_else(|| Error::Inconsistent("product left the dihedral group".into()))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.m];
        for (l, &g) in self.images.iter().enumerate() {
            inv[g - 1] = l + 1;
        }
        Self::from_images(&inv).expect("inverse of a dihedral element is dihedral")
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DihedralKind::Shift(0) => f.write_str("id"),
            DihedralKind::Shift(1) => f.write_str("gamma"),
            DihedralKind::Shift(nu) => write!(f, "gamma^{nu}"),
            DihedralKind::Reflection(0) => f.write_str("tau"),
            DihedralKind::Reflection(1) => f.write_str("tau*gamma"),
            DihedralKind::Reflection(nu) => write!(f, "tau*gamma^{nu}"),
        }
    }
}

/// All `2m` elements: shifts `gamma^0 .. gamma^(m-1)`, then reflections.
pub fn dihedral_group(m: usize) -> Result<Vec<DihedralElement>> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!(
            "dihedral group of an m-cycle needs m >= 3, got {m}"
        )));
    }
    let shifts = (0..m).map(|nu| DihedralElement::new(m, DihedralKind::Shift(nu)));
    let refl = (0..m).map(|nu| DihedralElement::new(m, DihedralKind::Reflection(nu)));
    shifts.chain(refl).collect()
}

/// Pairing of two `m`-point cycles, `{ {(1, l), (2, g(l))} : l in [m] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairPartition {
    pub m: usize,
    /// Blocks `[(1, l), (2, g(l))]` for `l = 1..m`.
    pub blocks: Vec<[(usize, usize); 2]>,
}

impl PairPartition {
    /// Blocks as sorted vectors, sorted by first element; comparable with
    /// any other partition of `{1,2} x [m]` in the same canonical form.
    pub fn canonical_blocks(&self) -> Vec<Vec<(usize, usize)>> {
        let mut blocks: Vec<Vec<(usize, usize)>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut v = b.to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        blocks.sort();
        blocks
    }
}

pub fn pair_partition(g: &DihedralElement) -> PairPartition {
    PairPartition {
        m: g.m(),
        blocks: (1..=g.m()).map(|l| [(1, l), (2, g.apply(l))]).collect(),
    }
}
