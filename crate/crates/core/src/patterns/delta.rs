use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Binary 2x2 block-offset matrix `(alpha beta / gamma delta)` with even
/// entry sum. Row `i` of an index-matrix `n * Delta + Lambda` says whether
/// the `p`/`q` coordinate of that row sits in the upper or lower half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaMatrix {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
    pub delta: u8,
}

impl DeltaMatrix {
    /// Checked constructor: entries in {0, 1} with even sum.
    pub fn new(alpha: u8, beta: u8, gamma: u8, delta: u8) -> Result<Self> {
        let d = DeltaMatrix { alpha, beta, gamma, delta };
        if [alpha, beta, gamma, delta].iter().any(|&x| x > 1)
            || (alpha + beta + gamma + delta) % 2 != 0
        {
            return Err(Error::NotInAlphabet(d.to_string()));
        }
        Ok(d)
    }

    pub(crate) const fn raw(alpha: u8, beta: u8, gamma: u8, delta: u8) -> Self {
        DeltaMatrix { alpha, beta, gamma, delta }
    }

    pub fn upper(self) -> (u8, u8) {
        (self.alpha, self.beta)
    }

    pub fn lower(self) -> (u8, u8) {
        (self.gamma, self.delta)
    }

    pub fn first_column(self) -> (u8, u8) {
        (self.alpha, self.gamma)
    }

    pub fn second_column(self) -> (u8, u8) {
        (self.beta, self.delta)
    }

    pub fn rows_equal(self) -> bool {
        self.upper() == self.lower()
    }

    pub fn in_alphabet(self) -> bool {
        DELTA_ALPHABET.contains(&self)
    }

    pub fn check(self) -> Result<Self> {
        if self.in_alphabet() {
            Ok(self)
        } else {
            Err(Error::NotInAlphabet(self.to_string()))
        }
    }

    /// Index 0..8 into [`DELTA_ALPHABET`].
    pub fn index(self) -> usize {
        DELTA_ALPHABET
            .iter()
            .position(|&d| d == self)
            .expect("delta matrix outside alphabet")
    }
}

impl fmt::Display for DeltaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}/{}{})", self.alpha, self.beta, self.gamma, self.delta)
    }
}

impl Serialize for DeltaMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for DeltaMatrix {
    type Err = Error;

    /// Accepts `0011`, `00/11` or `(00/11)`.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | '/' | ' '))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::NotInAlphabet(s.to_string())),
            })
            .collect::<Result<_>>()?;
        if bits.len() != 4 {
            return Err(Error::NotInAlphabet(s.to_string()));
        }
        DeltaMatrix::new(bits[0], bits[1], bits[2], bits[3])
    }
}

/// The eight binary 2x2 matrices with even entry sum: first the four with
/// equal rows, then the four with different rows.
pub const DELTA_ALPHABET: [DeltaMatrix; 8] = [
    DeltaMatrix::raw(0, 0, 0, 0),
    DeltaMatrix::raw(1, 1, 1, 1),
    DeltaMatrix::raw(0, 1, 0, 1),
    DeltaMatrix::raw(1, 0, 1, 0),
    DeltaMatrix::raw(0, 0, 1, 1),
    DeltaMatrix::raw(1, 1, 0, 0),
    DeltaMatrix::raw(1, 0, 0, 1),
    DeltaMatrix::raw(0, 1, 1, 0),
];

pub fn delta_alphabet() -> Vec<DeltaMatrix> {
    DELTA_ALPHABET.to_vec()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DeltaShape {
    /// Columns differ: the multi-index switches block half.
    Step,
    Plateau,
}

pub fn classify_delta(d: DeltaMatrix) -> Result<DeltaShape> {
    d.check()?;
    Ok(if d.first_column() != d.second_column() {
        DeltaShape::Step
    } else {
        DeltaShape::Plateau
    })
}

/// How consecutive delta matrices must chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DominoMode {
    /// Second column of `D_l` equals first column of `D_{l+1}`.
    Forward,
    /// `alpha_{l+1} = beta_l` and `delta_{l+1} = gamma_l`.
    Reverse,
}

impl fmt::Display for DominoMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DominoMode::Forward => f.write_str("forward"),
            DominoMode::Reverse => f.write_str("reverse"),
        }
    }
}

impl FromStr for DominoMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "forward" | "domino" => Ok(DominoMode::Forward),
            "reverse" => Ok(DominoMode::Reverse),
            other => Err(Error::InvalidParameter(format!("unknown domino condition '{other}'"))),
        }
    }
}

impl DominoMode {
    /// Whether `next` may follow `cur`.
    pub fn links(self, cur: DeltaMatrix, next: DeltaMatrix) -> bool {
        match self {
            DominoMode::Forward => cur.second_column() == next.first_column(),
            DominoMode::Reverse => next.alpha == cur.beta && next.delta == cur.gamma,
        }
    }

    /// The two alphabet members that may follow `cur`.
    pub fn successors(self, cur: DeltaMatrix) -> impl Iterator<Item = DeltaMatrix> {
        DELTA_ALPHABET
            .into_iter()
            .filter(move |&next| self.links(cur, next))
    }
}

/// Cyclic domino check (position `m + 1` wraps to 1).
pub fn check_domino(seq: &[DeltaMatrix], mode: DominoMode) -> bool {
    if seq.is_empty() {
        return false;
    }
    let m = seq.len();
    (0..m).all(|l| mode.links(seq[l], seq[(l + 1) % m]))
}
