//! Independent oracles and random generators shared by the integration tests.
//! The oracles only use plain modular arithmetic over prime fields.

#![allow(dead_code)]

use rand::Rng;
use tamesys::field::Field;
use tamesys::matrix::MatrixGF;
use tamesys::point::Point;
use tamesys::systems::SolutionTuple;

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Rank of a list of vectors over the prime field `F_p`.
pub fn rank_mod(vectors: &[Vec<u64>], p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col], p);
        let pivot_row: Vec<u64> = rows[rank].iter().map(|x| x * inv % p).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let c = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - c * y % p) % p;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Rank of the columns of `a` selected by `mask`.
pub fn column_rank_oracle(a: &MatrixGF, mask: u64) -> usize {
    let p = a.field().order() as u64;
    let cols: Vec<Vec<u64>> = (0..a.cols())
        .filter(|c| mask >> c & 1 == 1)
        .map(|c| a.column(c).iter().map(|&x| x as u64).collect())
        .collect();
    rank_mod(&cols, p)
}

/// Ranks of all column subsets, indexed by mask.
pub fn all_column_ranks(a: &MatrixGF) -> Vec<usize> {
    (0..1u64 << a.cols()).map(|m| column_rank_oracle(a, m)).collect()
}

/// Maximum of `|I| + |J|` over disjoint independent `I, J`.
pub fn brute_union_max(ranks: &[usize], k: usize) -> usize {
    let full = (1usize << k) - 1;
    (0..=full)
        .filter(|&i| ranks[i] == i.count_ones() as usize)
        .map(|i| i.count_ones() as usize + ranks[full & !i])
        .max()
        .unwrap()
}

/// Minimum of `|ground ∖ U| + 2 r(U)`.
pub fn brute_union_min(ranks: &[usize], k: usize) -> usize {
    let full = (1usize << k) - 1;
    (0..=full)
        .map(|u| k - u.count_ones() as usize + 2 * ranks[u])
        .min()
        .unwrap()
}

/// Tameness through the rank inequality on every proper subset of columns.
pub fn tame_by_inequality(ranks: &[usize], m: usize, k: usize) -> bool {
    if ranks[(1 << k) - 1] != m {
        return false;
    }
    (0..(1usize << k) - 1).all(|u| 2 * ranks[u] + k >= 2 * m + 1 + u.count_ones() as usize)
}

/// Tameness through two disjoint bases avoiding each column, by enumeration.
pub fn tame_by_bases(ranks: &[usize], m: usize, k: usize) -> bool {
    let full = (1usize << k) - 1;
    if ranks[full] != m {
        return false;
    }
    (0..k).all(|i| {
        let ground = full & !(1 << i);
        (0..=full).any(|b1| {
            b1 & !ground == 0
                && b1.count_ones() as usize == m
                && ranks[b1] == m
                && ranks[ground & !b1] == m
        })
    })
}

/// Affine rank as one plus the rank of the differences `x_i − x_1`.
pub fn affine_rank_oracle(x: &SolutionTuple) -> usize {
    let p = x.field().order() as u64;
    if x.k() == 0 {
        return 0;
    }
    let first = x.point(0).coords();
    let diffs: Vec<Vec<u64>> = x.points()[1..]
        .iter()
        .map(|pt| {
            pt.coords()
                .iter()
                .zip(first)
                .map(|(&a, &b)| (a as u64 + p - b as u64) % p)
                .collect()
        })
        .collect();
    1 + rank_mod(&diffs, p)
}

pub fn random_matrix<R: Rng>(f: &Field, m: usize, k: usize, balanced: bool, rng: &mut R) -> MatrixGF {
    let q = f.order();
    loop {
        let rows: Vec<Vec<u32>> = (0..m)
            .map(|_| {
                let mut row: Vec<u32> = (0..k).map(|_| rng.gen_range(0..q)).collect();
                if balanced {
                    let s = f.sum(&row[..k - 1]);
                    row[k - 1] = f.neg(s);
                }
                row
            })
            .collect();
        let a = MatrixGF::from_rows(f, &rows).unwrap();
        if a.rank() == m {
            return a;
        }
    }
}

/// A random tame balanced `m × k` matrix, by rejection.
pub fn random_tame<R: Rng>(f: &Field, m: usize, k: usize, rng: &mut R) -> MatrixGF {
    for _ in 0..100_000 {
        let a = random_matrix(f, m, k, true, rng);
        if tame_by_inequality(&all_column_ranks(&a), m, k) {
            return a;
        }
    }
    panic!("no tame balanced {m} x {k} matrix over F_{} found", f.order());
}

pub fn random_tuple<R: Rng>(f: &Field, n: usize, k: usize, rng: &mut R) -> SolutionTuple {
    let q = f.order();
    let pts = (0..k)
        .map(|_| Point::new((0..n).map(|_| rng.gen_range(0..q)).collect()))
        .collect();
    SolutionTuple::new(f, n, pts).unwrap()
}
