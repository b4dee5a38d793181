use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::bounds::{self, as_decimal};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::MatrixGF;
use crate::point::{space_size, Point};
use crate::poly::Poly;

/// Largest `q^n` for which the `q^n × q^n` matrix is built.
pub const CLP_SPACE_LIMIT: u64 = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClpReport {
    pub q: u32,
    pub n: usize,
    pub d: u64,
    /// side length `q^n`
    pub size: u64,
    pub rank: usize,
    #[serde(serialize_with = "as_decimal")]
    pub bound: BigUint,
    pub holds: bool,
}

/// `Π_i (1 − (x_i − y_i)^{q−1})`, the indicator of `x = y`.
pub fn diagonal_indicator(field: &Field, n: usize) -> Poly {
    let one = Poly::constant(field, 2 * n, 1);
    (0..n).fold(one.clone(), |acc, i| {
        let diff = Poly::var(field, 2 * n, i).sub(&Poly::var(field, 2 * n, n + i));
        acc.mul(&one.sub(&diff.pow(field.order() - 1)))
    })
}

/// Rank of `M_{ab} = f(a, b)` over `a, b ∈ F_q^n` against `2·m_{q,n,⌊d/2⌋}`.
///
/// With `Φ_{a,α} = a^α`, the matrix factors as `Φ C Φᵀ` where `C` holds the
/// coefficients of `x^α y^β`. A random `f` is drawn when none is given.
pub fn clp_rank_check<R: Rng>(field: &Field, n: usize, d: u64, f: Option<&Poly>, rng: &mut R) -> Result<ClpReport> {
    let q = field.order();
    let size = space_size(q, n, CLP_SPACE_LIMIT)?;
    let drawn;
    let f = match f {
        Some(f) => f,
        None => {
            drawn = Poly::random(field, 2 * n, d, rng);
            &drawn
        }
    };
    if f.nvars() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: f.nvars(),
        });
    }
    if f.degree() > d {
        return Err(Error::DegreeTooHigh {
            degree: f.degree(),
            limit: d,
        });
    }
    let code = |e: &[u32]| e.iter().rev().fold(0usize, |acc, &x| acc * q as usize + x as usize);
    let mut c = MatrixGF::zeros(field, size as usize, size as usize);
    for (e, coef) in f.terms() {
        let (ex, ey) = e.split_at(n);
        let (i, j) = (code(ex), code(ey));
        c.set(i, j, field.add(c.get(i, j), coef));
    }
    let phi_rows: Vec<Vec<Elem>> = (0..size)
        .map(|a| {
            let pt = Point::from_code(a, q, n);
            (0..size)
                .map(|alpha| {
                    let exps = Point::from_code(alpha, q, n);
                    pt.coords()
                        .iter()
                        .zip(exps.coords())
                        .fold(1, |m, (&v, &k)| field.mul(m, field.pow(v, k as u64)))
                })
                .collect()
        })
        .collect();
    let phi = MatrixGF::from_rows(field, &phi_rows)?;
    let m = phi.mul(&c)?.mul(&phi.transpose())?;
    let rank = m.rank();
    let bound = bounds::monomial_count_int(q, n as u32, d / 2) * BigUint::from(2u32);
    let holds = BigUint::from(rank) <= bound;
    if !holds {
        return Err(Error::InvariantViolated(format!(
            "rank {rank} exceeds 2 m_(q,n,d/2) = {bound} for q = {q}, n = {n}, d = {d}"
        )));
    }
    Ok(ClpReport {
        q,
        n,
        d,
        size,
        rank,
        bound,
        holds,
    })
}
