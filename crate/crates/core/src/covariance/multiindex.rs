use serde::Serialize;

use crate::budget::saturating_pow;
use crate::ensemble::{ClassTable, IndexPair};
use crate::patterns::{DihedralElement, PairPartition};
use crate::{Budget, Error, Result};

/// Two rows of index pairs, row `i` of length `k_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MultiIndex {
    pub rows: [Vec<IndexPair>; 2],
}

impl MultiIndex {
    /// Build from the two p-sequences; `q_l = p_{l+1}` cyclically.
    pub fn from_p_sequences(row1: &[usize], row2: &[usize]) -> Result<Self> {
        let row = |ps: &[usize]| -> Result<Vec<IndexPair>> {
            if ps.is_empty() {
                return Err(Error::InvalidParameter("multi-index rows must be nonempty".into()));
            }
            Ok((0..ps.len()).map(|l| IndexPair::new(ps[l], ps[(l + 1) % ps.len()])).collect())
        };
        Ok(Self {
            rows: [row(row1)?, row(row2)?],
        })
    }

    pub fn k1(&self) -> usize {
        self.rows[0].len()
    }

    pub fn k2(&self) -> usize {
        self.rows[1].len()
    }

    /// `P_{i,l}` for `i in {1, 2}` and 1-based `l`.
    pub fn get(&self, i: usize, l: usize) -> IndexPair {
        self.rows[i - 1][l - 1]
    }

    /// Cyclic consistency `p_{l+1} = q_l` of both rows.
    pub fn is_consistent(&self) -> bool {
        self.rows.iter().all(|row| {
            let k = row.len();
            (0..k).all(|l| row[(l + 1) % k].p == row[l].q)
        })
    }
}

/// Every consistent multi-index with rows of length `k1`, `k2` over `[dim]`.
///
/// Streams `dim^(k1 + k2)` values in lexicographic order of the p-sequences.
pub fn enumerate_consistent_multiindices(
    dim: usize,
    k1: usize,
    k2: usize,
    budget: Budget,
) -> Result<impl Iterator<Item = MultiIndex>> {
    if dim == 0 || k1 == 0 || k2 == 0 {
        return Err(Error::InvalidParameter("need dim, k1, k2 >= 1".into()));
    }
    let total = saturating_pow(dim as u128, (k1 + k2) as u32);
    budget.check("consistent multi-indices", total)?;
    let k = k1 + k2;
    Ok((0..total as u64).map(move |mut code| {
        let mut ps = vec![0usize; k];
        for slot in ps.iter_mut().rev() {
            *slot = (code % dim as u64) as usize + 1;
            code /= dim as u64;
        }
        MultiIndex::from_p_sequences(&ps[..k1], &ps[k1..]).expect("nonempty rows")
    }))
}

/// Partition of the positions `(i, l)` by equivalence class of `P_{i,l}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InducedPartition {
    /// Sorted blocks, each sorted.
    pub blocks: Vec<Vec<(usize, usize)>>,
}

impl InducedPartition {
    pub fn equals_pair_partition(&self, other: &PairPartition) -> bool {
        self.blocks == other.canonical_blocks()
    }

    /// Every block of `other` lies inside a block of `self`.
    pub fn is_coarsening_of(&self, other: &PairPartition) -> bool {
        let block_of = |pos: (usize, usize)| self.blocks.iter().position(|b| b.contains(&pos));
        other
            .blocks
            .iter()
            .all(|[x, y]| block_of(*x).is_some() && block_of(*x) == block_of(*y))
    }
}

pub fn induced_partition(index: &MultiIndex, table: &ClassTable) -> Result<InducedPartition> {
    let mut keyed: Vec<(u32, (usize, usize))> = Vec::with_capacity(index.k1() + index.k2());
    for (i, row) in index.rows.iter().enumerate() {
        for (l, &pair) in row.iter().enumerate() {
            pair.check(table.dim())?;
            let (id, _) = table
                .get(pair.p, pair.q)
                .ok_or(Error::MeetsZeroEntry { p: pair.p, q: pair.q })?;
            keyed.push((id, (i + 1, l + 1)));
        }
    }
    keyed.sort_unstable();
    let mut blocks: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut last = None;
    for (id, pos) in keyed {
        if last == Some(id) {
            blocks.last_mut().expect("open block").push(pos);
        } else {
            blocks.push(vec![pos]);
            last = Some(id);
        }
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort();
    Ok(InducedPartition { blocks })
}

/// Membership rule for the good set of a pair partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
pub enum GoodRule {
    /// The induced partition equals the pair partition.
    #[default]
    Equality,
    /// The induced partition merges at least the pairs of the pair partition.
    Coarsening,
}

impl std::str::FromStr for GoodRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "equality" | "equal" => Ok(GoodRule::Equality),
            "coarsening" | "coarse" => Ok(GoodRule::Coarsening),
            other => Err(Error::InvalidParameter(format!("unknown good-set rule '{other}'"))),
        }
    }
}

impl std::fmt::Display for GoodRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GoodRule::Equality => "equality",
            GoodRule::Coarsening => "coarsening",
        })
    }
}

/// Square multi-index `(m, m)` as two 0-based p-sequences.
pub(crate) struct GoodIndex<'a> {
    /// Position of the group element in the list passed to the walker.
    pub g: usize,
    pub row1: &'a [usize],
    pub row2: &'a [usize],
    /// Product over `l` of the member signs of `P_{1,l}` and `P_{2,g(l)}`.
    pub sign: i64,
}

/// Visit every element of the good sets of the elements `gs` (all of the
/// same `m`), as 0-based p-sequences.
///
/// Row 1 is enumerated over all p-sequences avoiding zero entries (with
/// pairwise distinct classes under [`GoodRule::Equality`]); for each `g`,
/// row 2 is then built position by position from the members of the class
/// it must match. `first` restricts `p_{1,1}`.
pub(crate) fn for_each_good(
    table: &ClassTable,
    gs: &[DihedralElement],
    rule: GoodRule,
    first: Option<usize>,
    visit: &mut dyn FnMut(GoodIndex<'_>),
) {
    let Some(m) = gs.first().map(|g| g.m()) else {
        return;
    };
    let dim = table.dim();
    // class id -> members as 0-based (p, q, sign)
    let members: Vec<Vec<(usize, usize, i8)>> = table
        .classes()
        .iter()
        .map(|c| c.members.iter().map(|&(pr, s)| (pr.p - 1, pr.q - 1, s)).collect())
        .collect();
    // g^{-1}(j) for 0-based j
    let ginvs: Vec<Vec<usize>> = gs
        .iter()
        .map(|g| {
            let mut ginv = vec![0usize; m];
            for l in 0..m {
                ginv[g.apply(l + 1) - 1] = l;
            }
            ginv
        })
        .collect();

    struct Ctx<'a> {
        table: &'a ClassTable,
        members: &'a [Vec<(usize, usize, i8)>],
        ginvs: &'a [Vec<usize>],
        m: usize,
        dim: usize,
        distinct: bool,
        first: Option<usize>,
    }

    struct State {
        row1: Vec<usize>,
        cls: Vec<u32>,
        sgn1: Vec<i8>,
        row2: Vec<usize>,
    }

    fn row2_dfs(
        ctx: &Ctx<'_>,
        gi: usize,
        j: usize,
        sign: i64,
        st: &mut State,
        visit: &mut dyn FnMut(GoodIndex<'_>),
    ) {
        let m = ctx.m;
        let c = st.cls[ctx.ginvs[gi][j]] as usize;
        for &(p, q, s) in &ctx.members[c] {
            if j > 0 && p != st.row2[j] {
                continue;
            }
            if j == 0 {
                st.row2[0] = p;
            }
            if j + 1 < m {
                st.row2[j + 1] = q;
                row2_dfs(ctx, gi, j + 1, sign * i64::from(s), st, visit);
            } else if q == st.row2[0] {
                visit(GoodIndex {
                    g: gi,
                    row1: &st.row1,
                    row2: &st.row2,
                    sign: sign * i64::from(s),
                });
            }
        }
    }

    fn row1_dfs(ctx: &Ctx<'_>, l: usize, st: &mut State, visit: &mut dyn FnMut(GoodIndex<'_>)) {
        let m = ctx.m;
        if l == m {
            let Some((c, s)) = ctx.table.get0(st.row1[m - 1], st.row1[0]) else {
                return;
            };
            if ctx.distinct && st.cls[..m - 1].contains(&c) {
                return;
            }
            st.cls[m - 1] = c;
            st.sgn1[m - 1] = s;
            let sign: i64 = st.sgn1.iter().map(|&x| i64::from(x)).product();
            for gi in 0..ctx.ginvs.len() {
                row2_dfs(ctx, gi, 0, sign, st, visit);
            }
            return;
        }
        let range = match (l, ctx.first) {
            (0, Some(p)) => p..p + 1,
            _ => 0..ctx.dim,
        };
        for p in range {
            if l > 0 {
                let Some((c, s)) = ctx.table.get0(st.row1[l - 1], p) else {
                    continue;
                };
                if ctx.distinct && st.cls[..l - 1].contains(&c) {
                    continue;
                }
                st.cls[l - 1] = c;
                st.sgn1[l - 1] = s;
            }
            st.row1[l] = p;
            row1_dfs(ctx, l + 1, st, visit);
        }
    }

    let ctx = Ctx {
        table,
        members: &members,
        ginvs: &ginvs,
        m,
        dim,
        distinct: rule == GoodRule::Equality,
        first,
    };
    let mut st = State {
        row1: vec![0; m],
        cls: vec![0; m],
        sgn1: vec![0; m],
        row2: vec![0; m],
    };
    row1_dfs(&ctx, 0, &mut st, visit);
}

/// The good set of `g`: consistent `(m, m)` multi-indices avoiding zero
/// entries whose induced partition is the pair partition of `g` (or, under
/// [`GoodRule::Coarsening`], merges it).
pub fn good_multiindices(
    g: &DihedralElement,
    table: &ClassTable,
    rule: GoodRule,
    budget: Budget,
) -> Result<Vec<MultiIndex>> {
    budget.check(
        "good multi-indices",
        saturating_pow(table.dim() as u128, g.m() as u32).saturating_mul(1 << g.m()),
    )?;
    let mut out = Vec::new();
    for_each_good(table, std::slice::from_ref(g), rule, None, &mut |gi| {
        let r1: Vec<usize> = gi.row1.iter().map(|&p| p + 1).collect();
        let r2: Vec<usize> = gi.row2.iter().map(|&p| p + 1).collect();
        out.push(MultiIndex::from_p_sequences(&r1, &r2).expect("nonempty"));
    });
    Ok(out)
}
