use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::enumerate::{affine_rank_of_codes, SolutionEnumerator};
use super::pointset::PointSet;
use crate::error::{Error, Result};
use crate::matrix::MatrixGF;

/// Largest `q^n` handled by the exact search.
pub const EXACT_LIMIT: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exact,
    Greedy,
    Random,
}

/// Which solutions the returned set must avoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Forbid {
    /// affine rank `k − m`
    Generic,
    /// pairwise distinct coordinates
    Shape,
    /// not all coordinates equal
    Nontrivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    Exhaustive,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalResult {
    pub set: PointSet,
    pub size: usize,
    pub certificate: Certificate,
    /// Branch-and-bound nodes, or candidate orders tried in heuristic modes.
    pub work: u64,
}

/// Supports of the forbidden solutions in `F_q^n`, as bitmasks over codes.
/// Supersets of other supports are dropped.
fn forbidden_supports(a: &MatrixGF, full: &PointSet, forbid: Forbid) -> Result<Vec<u128>> {
    let generic_rank = a.cols() - a.rows();
    let mut supports = BTreeSet::new();
    for codes in SolutionEnumerator::new(a, full)? {
        let hit = match forbid {
            Forbid::Generic => affine_rank_of_codes(full, &codes) == generic_rank,
            Forbid::Shape => {
                let distinct: BTreeSet<_> = codes.iter().collect();
                codes.len() >= 2 && distinct.len() == codes.len()
            }
            Forbid::Nontrivial => codes.windows(2).any(|w| w[0] != w[1]),
        };
        if hit {
            supports.insert(codes.iter().fold(0u128, |m, &c| m | 1u128 << c));
        }
    }
    let mut sorted: Vec<u128> = supports.into_iter().collect();
    sorted.sort_by_key(|s| s.count_ones());
    let mut minimal: Vec<u128> = Vec::new();
    for s in sorted {
        if !minimal.iter().any(|&t| t & !s == 0) {
            minimal.push(s);
        }
    }
    Ok(minimal)
}

struct Search<'a> {
    size: usize,
    /// `by_point[p]`: forbidden supports whose largest element is `p`.
    by_point: &'a [Vec<u128>],
    best: u128,
    best_len: usize,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, next: usize, chosen: u128, len: usize) {
        self.nodes += 1;
        if len > self.best_len {
            self.best = chosen;
            self.best_len = len;
        }
        if next == self.size || len + (self.size - next) <= self.best_len {
            return;
        }
        let with = chosen | 1u128 << next;
        if self.by_point[next].iter().all(|&s| s & with != s) {
            self.run(next + 1, with, len + 1);
        }
        self.run(next + 1, chosen, len);
    }
}

fn admissible(by_point: &[Vec<u128>], chosen: u128, p: usize) -> bool {
    let with = chosen | 1u128 << p;
    by_point.iter().flatten().all(|&s| s & (1u128 << p) == 0 || s & with != s)
}

fn greedy(by_point: &[Vec<u128>], order: &[usize]) -> u128 {
    let mut chosen = 0u128;
    for &p in order {
        if admissible(by_point, chosen, p) {
            chosen |= 1u128 << p;
        }
    }
    chosen
}

/// A largest subset of `F_q^n` containing no forbidden solution of `A xᵀ = 0`.
///
/// All modes work on the hypergraph of forbidden supports, so they share the
/// `q^n ≤ 100` limit. `restarts` only matters in random mode.
pub fn max_solution_free_set<R: Rng>(
    a: &MatrixGF,
    n: usize,
    mode: SearchMode,
    forbid: Forbid,
    restarts: usize,
    rng: &mut R,
) -> Result<ExtremalResult> {
    let f = a.field();
    let full = PointSet::full(f, n)?;
    let size = full.space_size();
    if size > EXACT_LIMIT {
        return Err(Error::SearchSpaceTooLarge(format!(
            "{}^{n} = {size} points exceeds {EXACT_LIMIT}",
            f.order()
        )));
    }
    let size = size as usize;
    let mut by_point = vec![Vec::new(); size];
    for s in forbidden_supports(a, &full, forbid)? {
        by_point[127 - s.leading_zeros() as usize].push(s);
    }
    let (mask, certificate, work) = match mode {
        SearchMode::Exact => {
            let mut search = Search {
                size,
                by_point: &by_point,
                best: 0,
                best_len: 0,
                nodes: 0,
            };
            search.run(0, 0, 0);
            (search.best, Certificate::Exhaustive, search.nodes)
        }
        SearchMode::Greedy => {
            let order: Vec<usize> = (0..size).collect();
            (greedy(&by_point, &order), Certificate::Heuristic, 1)
        }
        SearchMode::Random => {
            let mut order: Vec<usize> = (0..size).collect();
            let mut best = greedy(&by_point, &order);
            for _ in 0..restarts {
                order.shuffle(rng);
                let cand = greedy(&by_point, &order);
                if cand.count_ones() > best.count_ones() {
                    best = cand;
                }
            }
            (best, Certificate::Heuristic, restarts as u64 + 1)
        }
    };
    let set = PointSet::from_codes(f, n, (0..size as u64).filter(|&c| mask >> c & 1 == 1))?;
    Ok(ExtremalResult {
        size: set.len(),
        set,
        certificate,
        work,
    })
}
