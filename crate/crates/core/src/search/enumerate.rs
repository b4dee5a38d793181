use std::collections::BTreeMap;

use serde::Serialize;

use super::pointset::PointSet;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::matrix::MatrixGF;
use crate::matroid;
use crate::point::Point;
use crate::systems::SolutionTuple;

/// Solves `A xᵀ = 0` over a point set by choosing the non-pivot coordinates of
/// the reduced row echelon form freely from `S` and solving for the pivots.
#[derive(Clone, Debug)]
pub struct SolutionEnumerator<'a> {
    set: &'a PointSet,
    k: usize,
    pivots: Vec<usize>,
    free: Vec<usize>,
    /// `coeff[r][f]`: coefficient of free coordinate `f` in pivot coordinate `r`.
    coeff: Vec<Vec<Elem>>,
    coords: Vec<Vec<Elem>>,
    counter: Vec<usize>,
    done: bool,
}

impl<'a> SolutionEnumerator<'a> {
    pub fn new(a: &MatrixGF, set: &'a PointSet) -> Result<Self> {
        matroid::require_full_row_rank(a)?;
        if a.field() != set.field() {
            return Err(Error::FieldMismatch);
        }
        let f = a.field();
        let rref = a.rref();
        let pivots = rref.pivots.clone();
        let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
        let coeff = (0..pivots.len())
            .map(|r| free.iter().map(|&c| f.neg(rref.matrix.get(r, c))).collect())
            .collect();
        let coords = set.elements().iter().map(|&c| set.point(c).coords().to_vec()).collect();
        let done = set.is_empty() && !free.is_empty();
        Ok(SolutionEnumerator {
            set,
            k: a.cols(),
            counter: vec![0; free.len()],
            pivots,
            free,
            coeff,
            coords,
            done,
        })
    }

    fn current(&self) -> Option<Vec<u64>> {
        let f = self.set.field();
        let q = f.order() as u64;
        let n = self.set.n();
        let mut codes = vec![0u64; self.k];
        for (slot, &c) in self.free.iter().zip(&self.counter) {
            codes[*slot] = self.set.elements()[c];
        }
        let mut coord = vec![0 as Elem; n];
        for (r, &p) in self.pivots.iter().enumerate() {
            coord.iter_mut().for_each(|c| *c = 0);
            for (j, &c) in self.counter.iter().enumerate() {
                let a = self.coeff[r][j];
                if a != 0 {
                    f.axpy(&mut coord, a, &self.coords[c]);
                }
            }
            let code = coord.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64);
            if !self.set.contains(code) {
                return None;
            }
            codes[p] = code;
        }
        Some(codes)
    }

    fn advance(&mut self) {
        let size = self.set.len();
        for c in self.counter.iter_mut() {
            *c += 1;
            if *c < size {
                return;
            }
            *c = 0;
        }
        self.done = true;
    }
}

impl Iterator for SolutionEnumerator<'_> {
    /// The codes of `x_1, …, x_k`.
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        while !self.done {
            let found = self.current();
            self.advance();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

pub fn tuple_from_codes(set: &PointSet, codes: &[u64]) -> SolutionTuple {
    let pts: Vec<Point> = codes.iter().map(|&c| set.point(c)).collect();
    SolutionTuple::new(set.field(), set.n(), pts).expect("codes decode to points of the right dimension")
}

/// Every `x ∈ S^k` with `A xᵀ = 0`, each exactly once.
pub fn enumerate_solutions<'a>(
    a: &MatrixGF,
    set: &'a PointSet,
) -> Result<impl Iterator<Item = SolutionTuple> + 'a> {
    Ok(SolutionEnumerator::new(a, set)?.map(move |codes| tuple_from_codes(set, &codes)))
}

/// Affine rank of the points with the given codes.
pub fn affine_rank_of_codes(set: &PointSet, codes: &[u64]) -> usize {
    let f = set.field();
    let n = set.n();
    let rows: Vec<Vec<Elem>> = codes
        .iter()
        .map(|&c| {
            let mut row = vec![1];
            row.extend_from_slice(set.point(c).coords());
            row
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    MatrixGF::from_rows(f, &rows)
        .map(|m| m.rank())
        .unwrap_or_else(|_| unreachable!("rows have length {}", n + 1))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RankHistogram {
    pub counts: BTreeMap<usize, u64>,
    pub total: u64,
}

pub fn arank_histogram(a: &MatrixGF, set: &PointSet) -> Result<RankHistogram> {
    let mut hist = RankHistogram::default();
    let limit = a.cols() - a.rows();
    for codes in SolutionEnumerator::new(a, set)? {
        let r = affine_rank_of_codes(set, &codes);
        if r > limit {
            return Err(Error::InvariantViolated(format!(
                "solution {codes:?} has affine rank {r} > k - m = {limit}"
            )));
        }
        *hist.counts.entry(r).or_insert(0) += 1;
        hist.total += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn f3() -> Field {
        Field::of_order(3).unwrap()
    }

    fn ones(f: &Field, k: usize) -> MatrixGF {
        MatrixGF::from_rows(f, &[vec![1; k]]).unwrap()
    }

    #[test]
    fn three_term_over_line() {
        let f = f3();
        let s = PointSet::full(&f, 1).unwrap();
        let sols: Vec<_> = SolutionEnumerator::new(&ones(&f, 3), &s).unwrap().collect();
        assert_eq!(sols.len(), 9);
        let hist = arank_histogram(&ones(&f, 3), &s).unwrap();
        assert_eq!(hist.counts, BTreeMap::from([(1, 3), (2, 6)]));
        assert_eq!(hist.total, 9);
    }

    #[test]
    fn restricted_set() {
        let f = f3();
        let s = PointSet::from_codes(&f, 1, [0, 1]).unwrap();
        let mut sols: Vec<_> = SolutionEnumerator::new(&ones(&f, 3), &s).unwrap().collect();
        sols.sort();
        assert_eq!(sols, vec![vec![0, 0, 0], vec![1, 1, 1]]);
        let empty = PointSet::empty(&f, 1).unwrap();
        assert_eq!(enumerate_solutions(&ones(&f, 3), &empty).unwrap().count(), 0);
        let single = PointSet::from_codes(&f, 2, [5]).unwrap();
        let hist = arank_histogram(&ones(&f, 3), &single).unwrap();
        assert_eq!(hist.counts, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn plane_histogram() {
        let f = f3();
        let s = PointSet::full(&f, 2).unwrap();
        let hist = arank_histogram(&ones(&f, 3), &s).unwrap();
        assert_eq!(hist.total, 81);
        assert_eq!(hist.counts[&2], 72);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // brute force over S^k for a 2x4 system over F_3 and a 5-point set in F_3^2
        let f = f3();
        let a = MatrixGF::from_i64_rows(&f, &[vec![1, 1, 1, 0], vec![0, 1, -1, 0]]).unwrap();
        let s = PointSet::from_codes(&f, 2, [0, 2, 3, 4, 8]).unwrap();
        let mut got: Vec<_> = SolutionEnumerator::new(&a, &s).unwrap().collect();
        got.sort();
        let mut want = Vec::new();
        let e = s.elements();
        for &x0 in e {
            for &x1 in e {
                for &x2 in e {
                    for &x3 in e {
                        let t = tuple_from_codes(&s, &[x0, x1, x2, x3]);
                        if crate::systems::is_solution(&a, &t).unwrap() {
                            want.push(vec![x0, x1, x2, x3]);
                        }
                    }
                }
            }
        }
        assert_eq!(got, want);
    }
}
