use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::delta::{DeltaMatrix, DominoMode};
use super::dihedral::DihedralElement;
use super::sequences::{all_reflection_sequences, walk};
use crate::ensemble::SymmetryClass;
use crate::numeric::powi;
use crate::{Budget, Error, Result};

/// Reading of a substantial pattern: forward domino with aligned lambdas
/// (cyclic shifts) or reverse domino with reversed lambdas (reflections).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SignMode {
    ForwardA,
    ReverseR,
}

impl SignMode {
    pub fn for_element(g: &DihedralElement) -> Self {
        if g.is_reflection() {
            SignMode::ReverseR
        } else {
            SignMode::ForwardA
        }
    }

    pub fn domino(self) -> DominoMode {
        match self {
            SignMode::ForwardA => DominoMode::Forward,
            SignMode::ReverseR => DominoMode::Reverse,
        }
    }
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignMode::ForwardA => "forward-a",
            SignMode::ReverseR => "reverse-r",
        })
    }
}

impl FromStr for SignMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "forward-a" | "forward" => Ok(SignMode::ForwardA),
            "reverse-r" | "reverse" => Ok(SignMode::ReverseR),
            other => Err(Error::InvalidParameter(format!("unknown sign mode '{other}'"))),
        }
    }
}

/// `s` with `E(a(P_1) a(P_2)) = s * sigma^2` for the pair of entries a
/// delta matrix links.
pub fn delta_sign(class: SymmetryClass, mode: SignMode, d: DeltaMatrix) -> Result<i8> {
    d.check()?;
    let off_plateau = !d.rows_equal() && d.first_column() == d.second_column();
    Ok(match class {
        SymmetryClass::Diii => {
            let forward = if off_plateau { 1 } else { -1 };
            match mode {
                SignMode::ForwardA => forward,
                SignMode::ReverseR => -forward,
            }
        }
        SymmetryClass::Ci => {
            if off_plateau {
                -1
            } else {
                1
            }
        }
    })
}

/// Sum over the delta sequences contributing to `g` of the product of
/// their signed covariances, at one fixed scalar sequence.
///
/// Enumerated, then compared against `2^(m+1) sigma^(2m)` (m even) or 0
/// (m odd); a disagreement is reported as [`Error::Inconsistent`].
pub fn per_g_leading_term(class: SymmetryClass, g: &DihedralElement, m: usize, sigma: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("per-element terms need m >= 3, got {m}")));
    }
    if g.m() != m {
        return Err(Error::ShapeMismatch(format!("element of D_{} used with m = {m}", 2 * g.m())));
    }
    let mode = SignMode::for_element(g);
    let signed = signed_sequence_sum(class, mode, m)?;
    let closed = if m % 2 == 0 { 1i64 << (m + 1) } else { 0 };
    if signed != closed {
        return Err(Error::Inconsistent(format!(
            "{class} {mode} m={m}: enumerated sign sum {signed}, expected {closed}"
        )));
    }
    Ok(signed as f64 * powi(sigma, 2 * m))
}

/// Leading contribution of one group element to the normalized variance:
/// the fixed-scalar sum above times the `n^m` scalar sequences over `(2n)^m`.
pub fn per_g_normalized_limit(class: SymmetryClass, g: &DihedralElement, m: usize, sigma: f64) -> Result<f64> {
    Ok(per_g_leading_term(class, g, m, sigma)? / powi(2.0, m))
}

/// Integer sum of sign products over the contributing sequences.
pub fn signed_sequence_sum(class: SymmetryClass, mode: SignMode, m: usize) -> Result<i64> {
    let sign_of = |seq: &[DeltaMatrix]| -> Result<i64> {
        seq.iter()
            .map(|&d| delta_sign(class, mode, d).map(i64::from))
            .product()
    };
    let mut total = 0i64;
    match mode {
        SignMode::ForwardA => {
            let mut err = None;
            walk(m, DominoMode::Forward, &mut |seq| match sign_of(seq) {
                Ok(s) => total += s,
                Err(e) => err = Some(e),
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        SignMode::ReverseR => {
            for seq in all_reflection_sequences(m, Budget::default())? {
                total += sign_of(&seq)?;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::ClassTable;
    use crate::patterns::delta::DELTA_ALPHABET;
    use crate::patterns::dihedral::{dihedral_group, DihedralKind};
    use crate::patterns::instances::LambdaKind;
    use crate::patterns::sequences::{in_positive_set, INVARIANT_SET_MIXED};

    fn d(s: &str) -> DeltaMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn table_examples() {
        assert_eq!(delta_sign(SymmetryClass::Diii, SignMode::ForwardA, d("00/11")).unwrap(), 1);
        assert_eq!(delta_sign(SymmetryClass::Diii, SignMode::ForwardA, d("00/00")).unwrap(), -1);
        assert_eq!(delta_sign(SymmetryClass::Ci, SignMode::ForwardA, d("00/00")).unwrap(), 1);
        for x in DELTA_ALPHABET {
            let f = delta_sign(SymmetryClass::Diii, SignMode::ForwardA, x).unwrap();
            assert_eq!(delta_sign(SymmetryClass::Diii, SignMode::ReverseR, x).unwrap(), -f);
            assert_eq!(
                delta_sign(SymmetryClass::Ci, SignMode::ForwardA, x).unwrap(),
                delta_sign(SymmetryClass::Ci, SignMode::ReverseR, x).unwrap()
            );
        }
        assert!(delta_sign(SymmetryClass::Ci, SignMode::ForwardA, DeltaMatrix::raw(1, 0, 0, 0)).is_err());
    }

    /// Recompute every sign from the class table: the two entries linked by
    /// `n Delta + Lambda(a, b)` must lie in one class, and their expectation
    /// is the product of member signs times `E(base^2)`.
    #[test]
    fn table_matches_class_lookup() {
        for class in SymmetryClass::ALL {
            for n in 2..=5 {
                let table = ClassTable::new(class, n).unwrap();
                for (mode, kind) in [(SignMode::ForwardA, LambdaKind::A), (SignMode::ReverseR, LambdaKind::R)] {
                    for x in DELTA_ALPHABET {
                        for a in 1..=n {
                            for b in (1..=n).filter(|&b| b != a) {
                                let lam = kind.matrix(a, b);
                                let p1 = (n * x.alpha as usize + lam[0][0], n * x.beta as usize + lam[0][1]);
                                let p2 = (n * x.gamma as usize + lam[1][0], n * x.delta as usize + lam[1][1]);
                                let (c1, s1) = table.get(p1.0, p1.1).unwrap();
                                let (c2, s2) = table.get(p2.0, p2.1).unwrap();
                                assert_eq!(c1, c2, "{class} {x} {p1:?} {p2:?}");
                                let e = f64::from(s1 * s2) * class.square_sign();
                                let expected = f64::from(delta_sign(class, mode, x).unwrap());
                                assert_eq!(e, expected, "{class} {mode} {x} a={a} b={b}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn forward_sign_dichotomy() {
        for m in 1..=8 {
            walk(m, DominoMode::Forward, &mut |seq| {
                let s: i64 = seq
                    .iter()
                    .map(|&x| i64::from(delta_sign(SymmetryClass::Diii, SignMode::ForwardA, x).unwrap()))
                    .product();
                if seq[0].rows_equal() {
                    assert!(seq.iter().all(|x| x.rows_equal()));
                    assert_eq!(s, if m % 2 == 0 { 1 } else { -1 });
                } else {
                    assert!(seq.iter().all(|x| !x.rows_equal()));
                    assert_eq!(s, 1);
                }
            });
        }
    }

    #[test]
    fn reflection_sign_dichotomy() {
        for m in 3..=8 {
            for seq in all_reflection_sequences(m, Budget::default()).unwrap() {
                let s: i64 = seq
                    .iter()
                    .map(|&x| i64::from(delta_sign(SymmetryClass::Diii, SignMode::ReverseR, x).unwrap()))
                    .product();
                if in_positive_set(seq[0]) {
                    assert_eq!(s, 1);
                } else {
                    assert!(seq.iter().all(|x| INVARIANT_SET_MIXED.contains(x)));
                    assert_eq!(s, if m % 2 == 0 { 1 } else { -1 });
                }
            }
        }
    }

    #[test]
    fn leading_terms() {
        let g = DihedralElement::new(5, DihedralKind::Shift(2)).unwrap();
        assert_eq!(per_g_leading_term(SymmetryClass::Diii, &g, 5, 1.0).unwrap(), 0.0);
        let tau = DihedralElement::tau(4).unwrap();
        assert_eq!(per_g_leading_term(SymmetryClass::Diii, &tau, 4, 1.0).unwrap(), 32.0);
        let g2 = DihedralElement::new(6, DihedralKind::Shift(2)).unwrap();
        assert_eq!(per_g_leading_term(SymmetryClass::Ci, &g2, 6, 1.0).unwrap(), 128.0);
        for m in 3..=10 {
            for class in SymmetryClass::ALL {
                for g in dihedral_group(m).unwrap() {
                    let t = per_g_leading_term(class, &g, m, 1.5).unwrap();
                    let want = if m % 2 == 0 { powi(2.0, m + 1) * powi(1.5, 2 * m) } else { 0.0 };
                    assert!((t - want).abs() <= 1e-9 * want.max(1.0));
                    let norm = per_g_normalized_limit(class, &g, m, 1.5).unwrap();
                    assert!((norm - want / powi(2.0, m)).abs() <= 1e-9 * want.max(1.0));
                }
            }
        }
        assert!(per_g_leading_term(SymmetryClass::Diii, &tau, 2, 1.0).is_err());
        assert!(per_g_leading_term(SymmetryClass::Diii, &tau, 5, 1.0).is_err());
    }
}
