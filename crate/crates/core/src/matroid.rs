//! The column matroid of a matrix: rank oracle, union of two independent sets with
//! a min–max certificate, tameness certificates and covering bases.
//!
//! Column subsets are passed around as sorted `Vec<usize>` at the API boundary and
//! as `u64` bitmasks internally, so matrices are limited to 64 columns.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::MatrixGF;

pub const MAX_COLUMNS: usize = 64;
/// Up to this ground-set size certificates are found by subset enumeration and are
/// lexicographically smallest; above it the augmenting-path algorithm is used.
pub const BRUTE_FORCE_LIMIT: usize = 20;

pub fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | (1u64 << i))
}

pub fn set_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Compares index sets as sorted sequences.
fn lex_less(a: u64, b: u64) -> bool {
    set_of(a) < set_of(b)
}

/// Rank oracle on the columns of a fixed matrix.
#[derive(Clone, Debug)]
pub struct ColumnMatroid {
    field: Field,
    rows: usize,
    columns: Vec<Vec<Elem>>,
}

impl ColumnMatroid {
    pub fn new(a: &MatrixGF) -> Result<Self> {
        if a.cols() > MAX_COLUMNS {
            return Err(Error::IndexOutOfRange {
                index: a.cols() - 1,
                len: MAX_COLUMNS,
            });
        }
        Ok(ColumnMatroid {
            field: a.field().clone(),
            rows: a.rows(),
            columns: (0..a.cols()).map(|c| a.column(c)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// `r_A(U)`: rank of the columns in `mask`.
    pub fn rank(&self, mask: u64) -> usize {
        let f = &self.field;
        // echelon basis of the span, each vector normalised at its leading index
        let mut basis: Vec<(usize, Vec<Elem>)> = Vec::new();
        let mut m = mask;
        while m != 0 {
            let c = m.trailing_zeros() as usize;
            m &= m - 1;
            let mut v = self.columns[c].clone();
            for (lead, b) in &basis {
                let x = v[*lead];
                if x != 0 {
                    f.axpy(&mut v, f.neg(x), b);
                }
            }
            if let Some(lead) = v.iter().position(|&x| x != 0) {
                let inv = f.inv(v[lead]);
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                basis.push((lead, v));
                if basis.len() == self.rows {
                    break;
                }
            }
        }
        basis.len()
    }

    pub fn is_independent(&self, mask: u64) -> bool {
        self.rank(mask) == mask.count_ones() as usize
    }

    /// Lexicographically smallest basis of the columns in `ground` containing
    /// the independent set `start` (greedy in index order).
    pub fn greedy_extend(&self, start: u64, ground: u64) -> u64 {
        let mut b = start;
        let target = self.rank(ground | start);
        for i in set_of(ground & !start) {
            if b.count_ones() as usize == target {
                break;
            }
            if self.is_independent(b | 1 << i) {
                b |= 1 << i;
            }
        }
        b
    }
}

pub fn column_rank(a: &MatrixGF, cols: &[usize]) -> Result<usize> {
    if let Some(&bad) = cols.iter().find(|&&c| c >= a.cols()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: a.cols(),
        });
    }
    Ok(a.select_columns(cols)?.rank())
}

fn check_indices(a: &MatrixGF, cols: &[usize]) -> Result<()> {
    match cols.iter().find(|&&c| c >= a.cols()) {
        Some(&bad) => Err(Error::IndexOutOfRange {
            index: bad,
            len: a.cols(),
        }),
        None if a.cols() > MAX_COLUMNS => Err(Error::IndexOutOfRange {
            index: a.cols() - 1,
            len: MAX_COLUMNS,
        }),
        None => Ok(()),
    }
}

/// Max-side pair and min-side set for the union of two independent column sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionCertificate {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub u_min: Vec<usize>,
    pub value: usize,
}

/// How the min side of a [`UnionCertificate`] is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinSide {
    /// Enumerate all subsets of the ground set; lexicographically smallest minimiser.
    Enumerate,
    /// Elements reachable from uncovered ones in the final exchange graph.
    ExchangeGraph,
    /// `Enumerate` up to [`BRUTE_FORCE_LIMIT`] elements, `ExchangeGraph` beyond.
    Auto,
}

/// Two disjoint independent subsets of `ground` of maximum total size, found by
/// shortest augmenting paths in the exchange graph. Also returns the set of
/// elements reachable from uncovered elements once no augmenting path remains.
pub fn union_augment(m: &ColumnMatroid, ground: u64) -> ([u64; 2], u64) {
    let mut sets = [0u64; 2];
    // greedy start
    for j in 0..2 {
        for x in set_of(ground & !sets[0] & !sets[1]) {
            if m.is_independent(sets[j] | 1 << x) {
                sets[j] |= 1 << x;
            }
        }
    }
    loop {
        let covered = sets[0] | sets[1];
        let sources = ground & !covered;
        // parent[y] = (x, j): x takes y's place in set j
        let mut parent: [Option<(usize, usize)>; 64] = [None; 64];
        let mut visited = sources;
        let mut queue: VecDeque<usize> = set_of(sources).into();
        let mut sink: Option<(usize, usize)> = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for (j, &s) in sets.iter().enumerate() {
                if s >> x & 1 == 1 {
                    continue;
                }
                if m.is_independent(s | 1 << x) {
                    sink = Some((x, j));
                    break 'bfs;
                }
                for y in set_of(s) {
                    if visited >> y & 1 == 0 && m.is_independent((s & !(1 << y)) | 1 << x) {
                        visited |= 1 << y;
                        parent[y] = Some((x, j));
                        queue.push_back(y);
                    }
                }
            }
        }
        let Some((mut x, j)) = sink else {
            return (sets, visited);
        };
        sets[j] |= 1 << x;
        while let Some((prev, pj)) = parent[x] {
            sets[pj] &= !(1 << x);
            sets[pj] |= 1 << prev;
            x = prev;
        }
        debug_assert!(m.is_independent(sets[0]) && m.is_independent(sets[1]));
        debug_assert_eq!(sets[0] & sets[1], 0);
    }
}

fn union_objective(m: &ColumnMatroid, ground: u64, u: u64) -> usize {
    ground.count_ones() as usize - u.count_ones() as usize + 2 * m.rank(u)
}

/// Lexicographically smallest `U ⊆ ground` minimising `|ground| − |U| + 2 r(U)`.
fn min_side_enumerate(m: &ColumnMatroid, ground: u64) -> u64 {
    let elems = set_of(ground);
    let mut best: Option<(usize, u64)> = None;
    for bits in 0u64..(1u64 << elems.len()) {
        let u = elems
            .iter()
            .enumerate()
            .filter(|(b, _)| bits >> b & 1 == 1)
            .fold(0u64, |acc, (_, &e)| acc | 1 << e);
        let v = union_objective(m, ground, u);
        let better = match best {
            None => true,
            Some((bv, bu)) => v < bv || (v == bv && lex_less(u, bu)),
        };
        if better {
            best = Some((v, u));
        }
    }
    best.map(|(_, u)| u).unwrap_or(0)
}

pub fn max_union_two_independent(a: &MatrixGF, ground: &[usize]) -> Result<UnionCertificate> {
    max_union_two_independent_with(a, ground, MinSide::Auto)
}

pub fn max_union_two_independent_with(
    a: &MatrixGF,
    ground: &[usize],
    min_side: MinSide,
) -> Result<UnionCertificate> {
    check_indices(a, ground)?;
    let m = ColumnMatroid::new(a)?;
    let g = mask_of(ground);
    let (sets, reachable) = union_augment(&m, g);
    let value = (sets[0] | sets[1]).count_ones() as usize;
    let use_enumeration = match min_side {
        MinSide::Enumerate => true,
        MinSide::ExchangeGraph => false,
        MinSide::Auto => g.count_ones() as usize <= BRUTE_FORCE_LIMIT,
    };
    let u = if use_enumeration {
        min_side_enumerate(&m, g)
    } else {
        reachable & g
    };
    let bound = union_objective(&m, g, u);
    if bound != value {
        return Err(Error::InvariantViolated(format!(
            "matroid union min-max mismatch: union {value}, bound {bound}"
        )));
    }
    Ok(UnionCertificate {
        i: set_of(sets[0]),
        j: set_of(sets[1]),
        u_min: set_of(u),
        value,
    })
}

pub fn require_full_row_rank(a: &MatrixGF) -> Result<()> {
    let rank = a.rank();
    if rank != a.rows() {
        return Err(Error::NotFullRowRank {
            rank,
            rows: a.rows(),
        });
    }
    Ok(())
}

/// Two disjoint bases inside `ground`, lexicographically smallest as a pair
/// `(B1, B2)` when `ground` is small, otherwise from the union algorithm.
fn two_disjoint_bases(m: &ColumnMatroid, ground: u64, rank: usize) -> Option<(u64, u64)> {
    if (ground.count_ones() as usize) < 2 * rank {
        return None;
    }
    if ground.count_ones() as usize <= BRUTE_FORCE_LIMIT {
        let elems = set_of(ground);
        let found = combinations(&elems, rank)
            .find(|&b1| m.is_independent(b1) && m.rank(ground & !b1) == rank);
        found.map(|b1| (b1, m.greedy_extend(0, ground & !b1)))
    } else {
        let (sets, _) = union_augment(m, ground);
        (sets[0].count_ones() as usize + sets[1].count_ones() as usize == 2 * rank)
            .then_some((sets[0], sets[1]))
    }
}

/// Two disjoint bases of `A` avoiding column `i`, if they exist.
pub fn disjoint_bases_avoiding(a: &MatrixGF, i: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    check_indices(a, &[i])?;
    require_full_row_rank(a)?;
    let m = ColumnMatroid::new(a)?;
    let ground = m.full_mask() & !(1u64 << i);
    Ok(two_disjoint_bases(&m, ground, a.rows()).map(|(b1, b2)| (set_of(b1), set_of(b2))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Tame,
    NotTame,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub column: usize,
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TamenessCertificate {
    pub verdict: Verdict,
    /// For a tame matrix: two disjoint bases avoiding each column.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    /// For a matrix that is not tame: `U ⊊ [k]` with `2 r(U) < 2m + 1 − k + |U|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_set: Option<Vec<usize>>,
}

impl TamenessCertificate {
    pub fn is_tame(&self) -> bool {
        self.verdict == Verdict::Tame
    }

    /// Re-checks the certificate against `A` from scratch.
    pub fn verify(&self, a: &MatrixGF) -> Result<bool> {
        let m = ColumnMatroid::new(a)?;
        let (rows, k) = (a.rows(), a.cols());
        match self.verdict {
            Verdict::Tame => Ok(self.witnesses.len() == k
                && self.witnesses.iter().enumerate().all(|(i, w)| {
                    let (b1, b2) = (mask_of(&w.b1), mask_of(&w.b2));
                    w.column == i
                        && b1 & b2 == 0
                        && (b1 | b2) >> i & 1 == 0
                        && w.b1.len() == rows
                        && w.b2.len() == rows
                        && m.is_independent(b1)
                        && m.is_independent(b2)
                })),
            Verdict::NotTame => Ok(match &self.violating_set {
                Some(u) => {
                    u.len() < k && violates_rank_inequality(&m, rows, mask_of(u))
                }
                None => false,
            }),
        }
    }
}

/// Whether `2 r(U) < 2m + 1 − k + |U|`.
pub fn violates_rank_inequality(m: &ColumnMatroid, rows: usize, u: u64) -> bool {
    let lhs = 2 * m.rank(u) as i64;
    let rhs = 2 * rows as i64 + 1 - m.len() as i64 + u.count_ones() as i64;
    lhs < rhs
}

/// Certified tameness test: for each column `i`, look for two disjoint bases in
/// `[k] ∖ {i}` via matroid union; a failure yields the min-side set, which
/// violates the rank inequality directly.
pub fn is_tame(a: &MatrixGF) -> Result<TamenessCertificate> {
    require_full_row_rank(a)?;
    let m = ColumnMatroid::new(a)?;
    let rows = a.rows();
    let k = a.cols();
    let mut witnesses = Vec::with_capacity(k);
    for i in 0..k {
        let ground = m.full_mask() & !(1u64 << i);
        match two_disjoint_bases(&m, ground, rows) {
            Some((b1, b2)) => witnesses.push(Witness {
                column: i,
                b1: set_of(b1),
                b2: set_of(b2),
            }),
            None => {
                let ground_set = set_of(ground);
                let cert = max_union_two_independent(a, &ground_set)?;
                let u = mask_of(&cert.u_min);
                if cert.value >= 2 * rows || !violates_rank_inequality(&m, rows, u) {
                    return Err(Error::InvariantViolated(format!(
                        "column {i}: no disjoint bases found but union value {} and set {:?} do not certify it",
                        cert.value, cert.u_min
                    )));
                }
                return Ok(TamenessCertificate {
                    verdict: Verdict::NotTame,
                    witnesses: Vec::new(),
                    violating_set: Some(cert.u_min),
                });
            }
        }
    }
    Ok(TamenessCertificate {
        verdict: Verdict::Tame,
        witnesses,
        violating_set: None,
    })
}

/// Bases `B1, B2` with `B1 ∪ B2 = [2m+1]` for an `(m+1) × (2m+1)` matrix of full
/// rank whose first `m` rows are tame.
pub fn covering_bases(a: &MatrixGF) -> Result<(Vec<usize>, Vec<usize>)> {
    let rows = a.rows();
    if rows == 0 || a.cols() != 2 * rows - 1 {
        return Err(Error::PreconditionViolated(format!(
            "expected an (m+1) x (2m+1) matrix, got {} x {}",
            rows,
            a.cols()
        )));
    }
    if a.rank() != rows {
        return Err(Error::PreconditionViolated("matrix does not have full row rank".into()));
    }
    let top = a.top_rows(rows - 1);
    if rows > 1 && !matches!(is_tame(&top), Ok(c) if c.is_tame()) {
        return Err(Error::PreconditionViolated("top block is not tame".into()));
    }
    let m = ColumnMatroid::new(a)?;
    let full = m.full_mask();
    let found = if a.cols() <= BRUTE_FORCE_LIMIT {
        // smallest basis B1 whose complement is independent
        let elems = set_of(full);
        let mut found = None;
        for b1 in combinations(&elems, rows) {
            if m.is_independent(b1) && m.is_independent(full & !b1) {
                found = Some((b1, m.greedy_extend(full & !b1, b1)));
                break;
            }
        }
        found
    } else {
        let (sets, _) = union_augment(&m, full);
        ((sets[0] | sets[1]) == full)
            .then(|| (m.greedy_extend(sets[0], full), m.greedy_extend(sets[1], full)))
    };
    let (b1, b2) = found.ok_or_else(|| {
        Error::InvariantViolated("no covering pair of bases despite a tame top block".into())
    })?;
    debug_assert_eq!(b1 | b2, full);
    Ok((set_of(b1), set_of(b2)))
}

/// All `size`-subsets of `elems` as masks, in lexicographic order.
pub fn combinations(elems: &[usize], size: usize) -> impl Iterator<Item = u64> + '_ {
    let n = elems.len();
    let mut idx: Option<Vec<usize>> = (size <= n).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let cur = idx.as_mut()?;
        let mask = cur.iter().fold(0u64, |acc, &t| acc | 1 << elems[t]);
        let mut pos = size;
        let mut advanced = false;
        while pos > 0 {
            pos -= 1;
            if cur[pos] < n - size + pos {
                cur[pos] += 1;
                for t in pos + 1..size {
                    cur[t] = cur[t - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            idx = None;
        }
        Some(mask)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(q: u64, rows: &[Vec<i64>]) -> MatrixGF {
        MatrixGF::from_i64_rows(&Field::of_order(q).unwrap(), rows).unwrap()
    }

    fn ap4() -> MatrixGF {
        mat(5, &[vec![1, -2, 1, 0], vec![0, 1, -2, 1]])
    }

    #[test]
    fn column_rank_examples() {
        let a = mat(3, &[vec![1, 1, 1]]);
        assert_eq!(column_rank(&a, &[0, 2]).unwrap(), 1);
        assert_eq!(column_rank(&ap4(), &[0, 3]).unwrap(), 2);
        assert_eq!(column_rank(&ap4(), &[]).unwrap(), 0);
        assert!(matches!(column_rank(&a, &[3]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn union_all_ones_row() {
        let a = mat(3, &[vec![1, 1, 1]]);
        let c = max_union_two_independent(&a, &[0, 1, 2]).unwrap();
        assert_eq!(c.value, 2);
        assert_eq!(c.u_min, vec![0, 1, 2]);
    }

    #[test]
    fn union_identity() {
        let a = MatrixGF::identity(&Field::prime(5).unwrap(), 3);
        let c = max_union_two_independent(&a, &[0, 1, 2]).unwrap();
        assert_eq!(c.value, 3);
        assert!(c.u_min.is_empty());
        assert_eq!(c.i.len() + c.j.len(), 3);
    }

    #[test]
    fn union_min_sides_agree() {
        let a = mat(3, &[vec![1, 2, 0, 1, 1, 0], vec![0, 1, 1, 1, 2, 0]]);
        let g: Vec<usize> = (0..6).collect();
        let e = max_union_two_independent_with(&a, &g, MinSide::Enumerate).unwrap();
        let x = max_union_two_independent_with(&a, &g, MinSide::ExchangeGraph).unwrap();
        assert_eq!(e.value, x.value);
    }

    #[test]
    fn tameness_examples() {
        let c = is_tame(&mat(3, &[vec![1, 1, 1]])).unwrap();
        assert!(c.is_tame());
        assert_eq!(c.witnesses[0].b1, vec![1]);
        assert_eq!(c.witnesses[0].b2, vec![2]);
        assert!(c.verify(&mat(3, &[vec![1, 1, 1]])).unwrap());

        let c = is_tame(&ap4()).unwrap();
        assert_eq!(c.verdict, Verdict::NotTame);
        assert_eq!(c.violating_set, Some(vec![]));
        assert!(c.verify(&ap4()).unwrap());

        assert!(is_tame(&mat(2, &[vec![1, 1, 1, 1]])).unwrap().is_tame());
    }

    #[test]
    fn tameness_requires_full_row_rank() {
        let a = mat(3, &[vec![1, 1, 1], vec![2, 2, 2]]);
        assert!(matches!(is_tame(&a), Err(Error::NotFullRowRank { rank: 1, rows: 2 })));
    }

    #[test]
    fn disjoint_bases_examples() {
        let a = mat(3, &[vec![1, 1, 1]]);
        assert_eq!(disjoint_bases_avoiding(&a, 1).unwrap(), Some((vec![0], vec![2])));
        assert_eq!(disjoint_bases_avoiding(&ap4(), 0).unwrap(), None);
        assert!(matches!(
            disjoint_bases_avoiding(&a, 5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn covering_bases_small() {
        let a = mat(3, &[vec![1, 1, 1], vec![1, 0, -1]]);
        let (b1, b2) = covering_bases(&a).unwrap();
        assert_eq!(b1, vec![0, 1]);
        assert_eq!(b2, vec![0, 2]);

        let zero_col = mat(3, &[vec![1, 1, 0], vec![1, 2, 0]]);
        assert!(matches!(covering_bases(&zero_col), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let masks: Vec<Vec<usize>> = combinations(&[0, 2, 5, 7], 2).map(set_of).collect();
        assert_eq!(
            masks,
            vec![vec![0, 2], vec![0, 5], vec![0, 7], vec![2, 5], vec![2, 7], vec![5, 7]]
        );
        assert_eq!(combinations(&[1, 2], 0).count(), 1);
        assert_eq!(combinations(&[1, 2], 3).count(), 0);
    }
}
