use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::delta::{DeltaMatrix, DominoMode, DELTA_ALPHABET};
use crate::numeric::binomial;
use crate::{Budget, Error, Result};

/// Longest sequence length accepted by the enumerators.
pub const MAX_SEQUENCE_LENGTH: usize = 16;

/// Restriction applied to cyclic delta sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SequenceFilter {
    All,
    IdenticalRows,
    /// Identical rows and `alpha_1 = 1`.
    IdenticalRowsAlpha1,
    DifferentRows,
    /// `alpha_1 = 1`.
    FirstEntryOne,
    StartsWith(DeltaMatrix),
    /// Sequences produced by [`complete_reflection_sequence`], optionally
    /// with a fixed first matrix. Reverse condition only.
    TauRealizable(Option<DeltaMatrix>),
}

impl SequenceFilter {
    pub fn accepts(&self, seq: &[DeltaMatrix]) -> bool {
        let first = seq[0];
        match *self {
            SequenceFilter::All => true,
            SequenceFilter::IdenticalRows => seq.iter().all(|d| d.rows_equal()),
            SequenceFilter::IdenticalRowsAlpha1 => {
                first.alpha == 1 && seq.iter().all(|d| d.rows_equal())
            }
            SequenceFilter::DifferentRows => seq.iter().all(|d| !d.rows_equal()),
            SequenceFilter::FirstEntryOne => first.alpha == 1,
            SequenceFilter::StartsWith(d) => first == d,
            SequenceFilter::TauRealizable(d) => {
                d.is_none_or(|d| first == d) && is_tau_realizable(seq)
            }
        }
    }
}

impl fmt::Display for SequenceFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |d: &DeltaMatrix| format!("{}{}{}{}", d.alpha, d.beta, d.gamma, d.delta);
        match self {
            SequenceFilter::All => f.write_str("all"),
            SequenceFilter::IdenticalRows => f.write_str("identical-rows"),
            SequenceFilter::IdenticalRowsAlpha1 => f.write_str("identical-rows-alpha1"),
            SequenceFilter::DifferentRows => f.write_str("different-rows"),
            SequenceFilter::FirstEntryOne => f.write_str("first-entry-one"),
            SequenceFilter::StartsWith(d) => write!(f, "starts-with:{}", bits(d)),
            SequenceFilter::TauRealizable(None) => f.write_str("tau-realizable"),
            SequenceFilter::TauRealizable(Some(d)) => write!(f, "tau-realizable:{}", bits(d)),
        }
    }
}

impl FromStr for SequenceFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s.as_str(), None),
        };
        let delta = || -> Result<DeltaMatrix> {
            arg.ok_or_else(|| Error::InvalidParameter(format!("filter '{s}' needs a delta matrix")))?
                .parse()
        };
        Ok(match head {
            "all" => SequenceFilter::All,
            "identical-rows" => SequenceFilter::IdenticalRows,
            "identical-rows-alpha1" => SequenceFilter::IdenticalRowsAlpha1,
            "different-rows" => SequenceFilter::DifferentRows,
            "first-entry-one" => SequenceFilter::FirstEntryOne,
            "starts-with" => SequenceFilter::StartsWith(delta()?),
            "tau-realizable" => SequenceFilter::TauRealizable(arg.map(|_| delta()).transpose()?),
            _ => return Err(Error::InvalidParameter(format!("unknown filter '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceEnumeration {
    pub m: usize,
    pub mode: DominoMode,
    pub filter: SequenceFilter,
    pub sequences: Vec<Vec<DeltaMatrix>>,
    pub count: u64,
    pub closed_form: u64,
}

impl SequenceEnumeration {
    pub fn matches(&self) -> bool {
        self.count == self.closed_form
    }
}

fn check_args(m: usize, mode: DominoMode, filter: SequenceFilter, budget: Budget) -> Result<()> {
    if m == 0 || m > MAX_SEQUENCE_LENGTH {
        return Err(Error::InvalidParameter(format!(
            "sequence length must be in [1, {MAX_SEQUENCE_LENGTH}], got {m}"
        )));
    }
    if let SequenceFilter::TauRealizable(_) = filter {
        if mode != DominoMode::Reverse || m < 3 {
            return Err(Error::InvalidParameter(
                "tau-realizable sequences need the reverse condition and m >= 3".into(),
            ));
        }
    }
    match filter {
        SequenceFilter::StartsWith(d) | SequenceFilter::TauRealizable(Some(d)) => {
            d.check()?;
        }
        _ => {}
    }
    budget.check("delta sequences", (m as u128) << m)
}

/// Every cyclic delta sequence of length `m` satisfying `mode` and `filter`.
pub fn enumerate_delta_sequences(
    m: usize,
    mode: DominoMode,
    filter: SequenceFilter,
    budget: Budget,
) -> Result<SequenceEnumeration> {
    check_args(m, mode, filter, budget)?;
    let mut sequences = Vec::new();
    walk(m, mode, &mut |seq| {
        if filter.accepts(seq) {
            sequences.push(seq.to_vec());
        }
    });
    Ok(SequenceEnumeration {
        m,
        mode,
        filter,
        count: sequences.len() as u64,
        closed_form: closed_form_count(m, mode, filter)?,
        sequences,
    })
}

/// Same as [`enumerate_delta_sequences`] without keeping the sequences.
pub fn count_delta_sequences(
    m: usize,
    mode: DominoMode,
    filter: SequenceFilter,
    budget: Budget,
) -> Result<SequenceEnumeration> {
    check_args(m, mode, filter, budget)?;
    let mut count = 0u64;
    walk(m, mode, &mut |seq| count += u64::from(filter.accepts(seq)));
    Ok(SequenceEnumeration {
        m,
        mode,
        filter,
        sequences: Vec::new(),
        count,
        closed_form: closed_form_count(m, mode, filter)?,
    })
}

/// Visits every cyclic `mode`-sequence of length `m`.
pub(crate) fn walk(m: usize, mode: DominoMode, visit: &mut dyn FnMut(&[DeltaMatrix])) {
    fn rec(
        seq: &mut Vec<DeltaMatrix>,
        m: usize,
        mode: DominoMode,
        visit: &mut dyn FnMut(&[DeltaMatrix]),
    ) {
        let last = *seq.last().expect("nonempty");
        if seq.len() == m {
            if mode.links(last, seq[0]) {
                visit(seq);
            }
            return;
        }
        for next in mode.successors(last) {
            seq.push(next);
            rec(seq, m, mode, visit);
            seq.pop();
        }
    }
    let mut seq = Vec::with_capacity(m);
    for d in DELTA_ALPHABET {
        seq.push(d);
        rec(&mut seq, m, mode, visit);
        seq.pop();
    }
}

/// Closed-form size of the filtered sequence set.
pub fn closed_form_count(m: usize, mode: DominoMode, filter: SequenceFilter) -> Result<u64> {
    if m == 0 || m > MAX_SEQUENCE_LENGTH {
        return Err(Error::InvalidParameter(format!("sequence length {m} out of range")));
    }
    let pow2 = |e: usize| 1u64 << e;
    let even = m % 2 == 0;
    let starts = |d: DeltaMatrix| -> u64 {
        if m == 1 {
            u64::from(mode.links(d, d))
        } else {
            pow2(m - 2)
        }
    };
    Ok(match (mode, filter) {
        (_, SequenceFilter::All) => pow2(m + 1),
        (_, SequenceFilter::FirstEntryOne) => pow2(m),
        (_, SequenceFilter::StartsWith(d)) => starts(d),
        (DominoMode::Forward, SequenceFilter::IdenticalRows) => pow2(m),
        (DominoMode::Forward, SequenceFilter::DifferentRows) => pow2(m),
        (DominoMode::Forward, SequenceFilter::IdenticalRowsAlpha1) => {
            (0..=m / 2).map(|j| binomial(m as u64, 2 * j as u64) as u64).sum()
        }
        // under the reverse condition both row-uniform sets reduce to constant
        // sequences plus, for even m, the alternation (ab/ab), (ba/ba)
        (DominoMode::Reverse, SequenceFilter::IdenticalRows | SequenceFilter::DifferentRows) => {
            if even {
                4
            } else {
                2
            }
        }
        (DominoMode::Reverse, SequenceFilter::IdenticalRowsAlpha1) => {
            if even {
                2
            } else {
                1
            }
        }
        (DominoMode::Reverse, SequenceFilter::TauRealizable(None)) => 8 * pow2(m - 2),
        (DominoMode::Reverse, SequenceFilter::TauRealizable(Some(_))) => pow2(m - 2),
        (DominoMode::Forward, SequenceFilter::TauRealizable(_)) => {
            return Err(Error::InvalidParameter(
                "tau-realizable sequences need the reverse condition".into(),
            ))
        }
    })
}

/// Delta sequence of a multi-index compatible with the reflection `tau`,
/// given `Delta_1` and the free upper-row bits `x_3, ..., x_m`.
///
/// Upper row of `Delta_l` is `(x_l, x_{l+1})`, lower row `(y_l, y_{l-1})`
/// with `y_0 = y_m = delta_1`. Each `Delta_l` must have even entry sum, which
/// forces `y_l = y_{l-1} + x_l + x_{l+1} (mod 2)`.
pub fn complete_reflection_sequence(
    first: DeltaMatrix,
    upper_row_bits: &[u8],
    m: usize,
) -> Result<Vec<DeltaMatrix>> {
    first.check()?;
    if m < 3 {
        return Err(Error::InvalidParameter(format!("reflection completion needs m >= 3, got {m}")));
    }
    if upper_row_bits.len() != m - 2 || upper_row_bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter(format!(
            "expected {} upper-row bits in {{0, 1}}",
            m - 2
        )));
    }
    // x[l] for l = 1..=m+1, with x_{m+1} = x_1
    let mut x = vec![0u8; m + 2];
    x[1] = first.alpha;
    x[2] = first.beta;
    x[3..=m].copy_from_slice(upper_row_bits);
    x[m + 1] = x[1];
    let mut y = vec![0u8; m + 1];
    y[0] = first.delta;
    for l in 1..=m {
        y[l] = (y[l - 1] + x[l] + x[l + 1]) % 2;
    }
    let seq: Vec<DeltaMatrix> = (1..=m)
        .map(|l| DeltaMatrix::new(x[l], x[l + 1], y[l], y[l - 1]))
        .collect::<Result<_>>()?;
    if seq[0] != first || y[m] != y[0] {
        return Err(Error::Inconsistent(format!(
            "reflection completion from {first} did not close"
        )));
    }
    Ok(seq)
}

/// All `8 * 2^(m-2)` reflection completions.
pub fn all_reflection_sequences(m: usize, budget: Budget) -> Result<Vec<Vec<DeltaMatrix>>> {
    if m < 3 || m > MAX_SEQUENCE_LENGTH {
        return Err(Error::InvalidParameter(format!("reflection completion needs 3 <= m <= {MAX_SEQUENCE_LENGTH}")));
    }
    budget.check("reflection completions", (m as u128) << m)?;
    let mut out = Vec::with_capacity(8 << (m - 2));
    for first in DELTA_ALPHABET {
        for bits in 0u32..(1 << (m - 2)) {
            let b: Vec<u8> = (0..m - 2).map(|i| (bits >> i & 1) as u8).collect();
            out.push(complete_reflection_sequence(first, &b, m)?);
        }
    }
    Ok(out)
}

fn is_tau_realizable(seq: &[DeltaMatrix]) -> bool {
    let m = seq.len();
    if m < 3 {
        return false;
    }
    let bits: Vec<u8> = seq[2..].iter().map(|d| d.alpha).collect();
    complete_reflection_sequence(seq[0], &bits, m).is_ok_and(|c| c == seq)
}

/// The subset closed under reflection completion whose members all carry
/// a positive sign.
pub const INVARIANT_SET_POSITIVE: [DeltaMatrix; 4] = [
    DeltaMatrix::raw(1, 1, 1, 1),
    DeltaMatrix::raw(1, 0, 0, 1),
    DeltaMatrix::raw(0, 0, 0, 0),
    DeltaMatrix::raw(0, 1, 1, 0),
];

/// The complementary closed subset; contains the two plateaus with
/// different rows.
pub const INVARIANT_SET_MIXED: [DeltaMatrix; 4] = [
    DeltaMatrix::raw(0, 1, 0, 1),
    DeltaMatrix::raw(1, 0, 1, 0),
    DeltaMatrix::raw(0, 0, 1, 1),
    DeltaMatrix::raw(1, 1, 0, 0),
];

/// Which invariant set `d` belongs to: `true` for [`INVARIANT_SET_POSITIVE`].
pub fn in_positive_set(d: DeltaMatrix) -> bool {
    d.alpha == d.delta
}
