use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use super::enumerate::{affine_rank_of_codes, tuple_from_codes, SolutionEnumerator};
use super::pointset::PointSet;
use crate::bounds::{as_decimal, monomial_count_int};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::MatrixGF;
use crate::matroid;
use crate::point::Point;
use crate::systems::{self, disjoint_rank_sets_prechecked};

/// Largest side `|S|^r` of the replay matrices.
pub const REPLAY_SIDE_LIMIT: u64 = 2048;
/// Largest table `|S|^t` for the extended random function.
pub const REPLAY_TENSOR_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    /// rank of `M(1_T)`
    pub rank_t: usize,
    pub claim1_holds: bool,
    /// nonzero entries `N` of `M(1_{T3})`
    pub support_t3: u64,
    pub rank_t3: usize,
    /// largest number of nonzeros in a row or column of `M(1_{T3})`
    pub max_line_support: u64,
    /// `N / k²`
    pub lower_bound_t3: f64,
    pub lower_bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplayReport {
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub t: usize,
    /// `⌊(q−1) n m / (2m+1)⌋`
    pub degree: u64,
    /// `⌊r (q−1) n m / (2m+1)⌋`
    pub r_degree: u64,
    pub set_size: usize,
    /// `dim V`, the functions on `S` orthogonal to all monomials of degree at most `degree`
    pub vanishing_dim: usize,
    /// codes of the section `S′`
    pub section: Vec<u64>,
    /// the index pair `(I, J)`; the remaining indices carry `z`
    pub pair: (Vec<usize>, Vec<usize>),
    /// how often each pair was returned over the rank-`r` solutions
    pub pair_counts: BTreeMap<String, u64>,
    pub solutions: u64,
    pub t1: u64,
    pub t2: u64,
    pub t3: u64,
    /// `|R|`, the pairs `(x, y)` completed by some `z` in `T3`
    pub r_pairs: u64,
    /// side `|S|^r` of the matrices
    pub side: u64,
    #[serde(serialize_with = "as_decimal")]
    pub claim1_bound: BigUint,
    pub trials: Vec<TrialReport>,
    pub mean_support: f64,
    /// `(q−1)/q · |R|`
    pub expected_support: f64,
    /// binomial standard deviation of the mean support
    pub sigma_mean: f64,
    pub support_within_3_sigma: bool,
}

fn mode_product(f: &Field, data: &[Elem], dims: &mut [usize], axis: usize, basis: &[Vec<Elem>], s: usize) -> Vec<Elem> {
    let inner: usize = dims[..axis].iter().product();
    let outer: usize = dims[axis + 1..].iter().product();
    let old = dims[axis];
    let mut out = vec![0; inner * s * outer];
    for o in 0..outer {
        for (j, row) in basis.iter().enumerate().take(old) {
            for i in 0..inner {
                let v = data[(o * old + j) * inner + i];
                if v == 0 {
                    continue;
                }
                for (z, &b) in row.iter().enumerate() {
                    if b != 0 {
                        let slot = &mut out[(o * s + z) * inner + i];
                        *slot = f.add(*slot, f.mul(v, b));
                    }
                }
            }
        }
    }
    dims[axis] = s;
    out
}

fn positional(pos: &[usize], idx: &[usize], s: usize) -> usize {
    idx.iter().rev().fold(0, |acc, &i| acc * s + pos[i])
}

fn checked_pow(base: u64, exp: usize, limit: u64) -> Option<u64> {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base).filter(|&v| v <= limit))
}

/// Replays the randomized rank argument for a tame balanced `m × (2m+1)`
/// system on a concrete `S`, over `trials` random functions `h` on `(S′)^t`.
pub fn proof_replay<R: Rng>(a: &MatrixGF, set: &PointSet, r: usize, trials: usize, rng: &mut R) -> Result<ReplayReport> {
    let f = a.field().clone();
    let (m, k) = (a.rows(), a.cols());
    let pre = |msg: String| Err(Error::PreconditionViolated(msg));
    if f != *set.field() {
        return Err(Error::FieldMismatch);
    }
    matroid::require_full_row_rank(a)?;
    if !systems::is_row_balanced(a) {
        return Err(Error::NotBalanced);
    }
    if k != 2 * m + 1 {
        return pre(format!("expected an m x (2m+1) matrix, got {m} x {k}"));
    }
    if !matroid::is_tame(a)?.is_tame() {
        return pre("matrix is not tame".into());
    }
    if r < 1 || r > m {
        return pre(format!("need 1 <= r <= m = {m}, got r = {r}"));
    }
    if set.is_empty() {
        return pre("S is empty".into());
    }
    let s = set.len();
    let t = k - 2 * r;
    let Some(side) = checked_pow(s as u64, r, REPLAY_SIDE_LIMIT) else {
        return pre(format!("|S|^r = {s}^{r} exceeds {REPLAY_SIDE_LIMIT}"));
    };
    let Some(tensor) = checked_pow(s as u64, t, REPLAY_TENSOR_LIMIT) else {
        return Err(Error::SearchSpaceTooLarge(format!("|S|^t = {s}^{t} exceeds {REPLAY_TENSOR_LIMIT}")));
    };
    let q = f.order();
    let n = set.n();
    let num = (q as u64 - 1) * n as u64 * m as u64;
    let degree = num / k as u64;
    let r_degree = r as u64 * num / k as u64;

    // evaluation of the monomials of degree <= `degree` on S; V is its kernel
    let exps: Vec<Point> = (0..(q as u64).pow(n as u32))
        .map(|c| Point::from_code(c, q, n))
        .filter(|e| e.coords().iter().map(|&x| x as u64).sum::<u64>() <= degree)
        .collect();
    let points = set.points();
    let eval_rows: Vec<Vec<Elem>> = exps
        .iter()
        .map(|e| {
            points
                .iter()
                .map(|z| {
                    z.coords()
                        .iter()
                        .zip(e.coords())
                        .fold(1, |acc, (&v, &x)| f.mul(acc, f.pow(v, x as u64)))
                })
                .collect()
        })
        .collect();
    let kernel = MatrixGF::from_rows(&f, &eval_rows)?.kernel_basis();
    let (basis, section_pos) = if kernel.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let rr = MatrixGF::from_rows(&f, &kernel)?.rref();
        (rr.matrix.top_rows(rr.rank).row_vecs(), rr.pivots)
    };
    let dim_v = basis.len();
    let in_section: Vec<bool> = (0..s).map(|i| section_pos.contains(&i)).collect();

    // solutions and the index pair
    let mut solutions: Vec<(Vec<u64>, usize)> = Vec::new();
    let mut pair_counts: BTreeMap<(Vec<usize>, Vec<usize>), u64> = BTreeMap::new();
    for codes in SolutionEnumerator::new(a, set)? {
        let rank = affine_rank_of_codes(set, &codes);
        if rank == r {
            let x = tuple_from_codes(set, &codes);
            let pair = disjoint_rank_sets_prechecked(a, &x, r)?;
            *pair_counts.entry(pair).or_insert(0) += 1;
        }
        solutions.push((codes, rank));
    }
    let default_pair = ((0..r).collect::<Vec<_>>(), (r..2 * r).collect::<Vec<_>>());
    let pair = pair_counts
        .iter()
        .max_by(|x, y| x.1.cmp(y.1).then_with(|| y.0.cmp(x.0)))
        .map(|(p, _)| p.clone())
        .unwrap_or(default_pair);
    let (pi, pj) = pair.clone();
    let pz: Vec<usize> = (0..k).filter(|c| !pi.contains(c) && !pj.contains(c)).collect();

    let pos_of = |c: u64| set.index_of(c).expect("solution codes lie in S");
    struct Entry {
        row: usize,
        col: usize,
        z: usize,
        in_t3: bool,
    }
    let mut entries = Vec::with_capacity(solutions.len());
    let (mut t1, mut t2, mut t3) = (0u64, 0u64, 0u64);
    let mut r_set = std::collections::BTreeSet::new();
    for (codes, rank) in &solutions {
        let pos: Vec<usize> = codes.iter().map(|&c| pos_of(c)).collect();
        let mut in_t3 = false;
        if *rank == r {
            t1 += 1;
            let sub = |idx: &[usize]| idx.iter().map(|&i| codes[i]).collect::<Vec<_>>();
            if affine_rank_of_codes(set, &sub(&pi)) == r && affine_rank_of_codes(set, &sub(&pj)) == r {
                t2 += 1;
                if pz.iter().all(|&i| in_section[pos[i]]) {
                    t3 += 1;
                    in_t3 = true;
                }
            }
        }
        let entry = Entry {
            row: positional(&pos, &pi, s),
            col: positional(&pos, &pj, s),
            z: positional(&pos, &pz, s),
            in_t3,
        };
        if in_t3 {
            r_set.insert((entry.row, entry.col));
        }
        entries.push(entry);
    }
    let r_pairs = r_set.len() as u64;
    let claim1_bound = monomial_count_int(q, (r * n) as u32, r_degree) * BigUint::from(2u32);

    let side_us = side as usize;
    let mut trial_reports = Vec::with_capacity(trials);
    for _ in 0..trials {
        let h: Vec<Elem> = (0..dim_v.pow(t as u32)).map(|_| rng.gen_range(0..q)).collect();
        let mut dims = vec![dim_v; t];
        let mut g = h;
        for axis in 0..t {
            g = mode_product(&f, &g, &mut dims, axis, &basis, s);
        }
        debug_assert_eq!(g.len() as u64, tensor);
        let mut mt = MatrixGF::zeros(&f, side_us, side_us);
        let mut m3 = MatrixGF::zeros(&f, side_us, side_us);
        for e in &entries {
            let v = g[e.z];
            mt.set(e.row, e.col, f.add(mt.get(e.row, e.col), v));
            if e.in_t3 {
                m3.set(e.row, e.col, f.add(m3.get(e.row, e.col), v));
            }
        }
        let rank_t = mt.rank();
        let claim1_holds = BigUint::from(rank_t) <= claim1_bound;
        if !claim1_holds {
            return Err(Error::InvariantViolated(format!(
                "rank M(1_T) = {rank_t} exceeds {claim1_bound}"
            )));
        }
        let mut row_nz = vec![0u64; side_us];
        let mut col_nz = vec![0u64; side_us];
        let mut support = 0u64;
        for (i, row_count) in row_nz.iter_mut().enumerate() {
            for (j, col_count) in col_nz.iter_mut().enumerate() {
                if m3.get(i, j) != 0 {
                    support += 1;
                    *row_count += 1;
                    *col_count += 1;
                }
            }
        }
        let max_line = row_nz.iter().chain(&col_nz).copied().max().unwrap_or(0);
        let rank_t3 = m3.rank();
        let lower_bound_holds = (rank_t3 as u64) * max_line * max_line >= support;
        if !lower_bound_holds {
            return Err(Error::InvariantViolated(format!(
                "rank {rank_t3} below N/k^2 with N = {support}, k = {max_line}"
            )));
        }
        trial_reports.push(TrialReport {
            rank_t,
            claim1_holds,
            support_t3: support,
            rank_t3,
            max_line_support: max_line,
            lower_bound_t3: if max_line == 0 { 0.0 } else { support as f64 / (max_line * max_line) as f64 },
            lower_bound_holds,
        });
    }

    let p = (q as f64 - 1.0) / q as f64;
    let expected_support = p * r_pairs as f64;
    let mean_support = if trials == 0 {
        0.0
    } else {
        trial_reports.iter().map(|t| t.support_t3 as f64).sum::<f64>() / trials as f64
    };
    let sigma_mean = if trials == 0 {
        0.0
    } else {
        (r_pairs as f64 * p * (1.0 - p) / trials as f64).sqrt()
    };
    let support_within_3_sigma = (mean_support - expected_support).abs() <= 3.0 * sigma_mean + 1e-9;
    Ok(ReplayReport {
        q,
        n,
        m,
        r,
        t,
        degree,
        r_degree,
        set_size: s,
        vanishing_dim: dim_v,
        section: section_pos.iter().map(|&i| set.elements()[i]).collect(),
        pair,
        pair_counts: pair_counts
            .into_iter()
            .map(|((i, j), c)| (format!("{i:?}|{j:?}"), c))
            .collect(),
        solutions: solutions.len() as u64,
        t1,
        t2,
        t3,
        r_pairs,
        side,
        claim1_bound,
        trials: trial_reports,
        mean_support,
        expected_support,
        sigma_mean,
        support_within_3_sigma,
    })
}
