//! Closed-form and semi-numerical quantities: monomial counts, the growth constant
//! `c_{q,δ}`, the slice-rank bound, Gaussian binomials, supersaturation constants
//! and the affine-subspace constant recurrence.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Slack used when rounding computed reals to integers.
const ROUNDING_SLACK: f64 = 1e-9;

/// Coefficients of `(1 + t + ⋯ + t^{q−1})^n`.
pub fn degree_profile(q: u32, n: u32) -> Vec<BigUint> {
    let mut coeffs = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); coeffs.len() + q as usize - 1];
        // sliding window sum of width q
        let mut window = BigUint::zero();
        for (d, slot) in next.iter_mut().enumerate() {
            if d < coeffs.len() {
                window += &coeffs[d];
            }
            if d >= q as usize && d - (q as usize) < coeffs.len() {
                window -= &coeffs[d - q as usize];
            }
            *slot = window.clone();
        }
        coeffs = next;
    }
    coeffs
}

/// `m_{q,n,d}` for an integer degree bound: exponent vectors in `{0,…,q−1}^n`
/// of total degree at most `max_degree`.
pub fn monomial_count_int(q: u32, n: u32, max_degree: u64) -> BigUint {
    degree_profile(q, n)
        .iter()
        .take(max_degree.saturating_add(1).min(usize::MAX as u64) as usize)
        .sum()
}

/// `m_{q,n,d}` for a real bound `d ≥ 0`; the bound is floored.
pub fn monomial_count(q: u32, n: u32, d: f64) -> Result<BigUint> {
    if d.is_nan() || d < 0.0 {
        return Err(Error::InvalidRange(format!("degree bound {d} must be >= 0")));
    }
    Ok(monomial_count_int(q, n, floor_with_slack(d)))
}

/// Serializes a big integer as a decimal string.
pub fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

fn floor_with_slack(x: f64) -> u64 {
    (x + ROUNDING_SLACK).floor().max(0.0) as u64
}

fn ceil_with_slack(x: f64) -> u64 {
    (x - ROUNDING_SLACK).ceil().max(0.0) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CConstant {
    pub value: f64,
    /// Minimiser `t*`; `0` when the infimum is approached as `t → 0⁺`.
    pub argmin: f64,
}

/// `c_{q,δ} = inf_{0<t≤1} (1 + t + ⋯ + t^{q−1}) t^{−δ(q−1)}`.
///
/// The logarithm of the objective is convex in `log t` with derivative
/// `E_t[j] − δ(q−1)`, where `E_t[j]` is the mean of `j` under weights `t^j`. That
/// mean increases from `0` to `(q−1)/2` on `(0, 1]`, so the minimiser solves
/// `E_t[j] = δ(q−1)` when `0 < δ < 1/2` and is `t = 1` when `δ ≥ 1/2`.
pub fn c_constant(q: u32, delta: f64) -> Result<CConstant> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidRange(format!("delta {delta} must lie in [0, 1]")));
    }
    if q < 2 {
        return Err(Error::InvalidRange(format!("q = {q} must be at least 2")));
    }
    let objective = |t: f64| -> f64 {
        let s: f64 = (0..q).map(|j| t.powi(j as i32)).sum();
        s * t.powf(-delta * (q - 1) as f64)
    };
    if delta == 0.0 {
        return Ok(CConstant {
            value: 1.0,
            argmin: 0.0,
        });
    }
    if delta >= 0.5 {
        return Ok(CConstant {
            value: q as f64,
            argmin: 1.0,
        });
    }
    let target = delta * (q - 1) as f64;
    let mean = |t: f64| -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        let mut pw = 1.0;
        for j in 0..q {
            num += j as f64 * pw;
            den += pw;
            pw *= t;
        }
        num / den
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok(CConstant {
        value: objective(t),
        argmin: t,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceRankBound {
    pub q: u32,
    pub m: u32,
    pub k: u32,
    pub n: u32,
    /// `⌊(q−1) n m / k⌋`
    pub degree: u64,
    #[serde(serialize_with = "as_decimal")]
    pub monomials: BigUint,
    /// `k · m_{q,n,(q−1)nm/k}`
    #[serde(serialize_with = "as_decimal")]
    pub bound: BigUint,
    pub c: f64,
    /// `c_{q,m/k} < q`, equivalently `k ≥ 2m + 1`.
    pub nontrivial: bool,
}

/// Upper bound on sets in `F_q^n` without nontrivial solutions to an `m × k`
/// balanced system.
pub fn slice_rank_bound(q: u32, m: u32, k: u32, n: u32) -> Result<SliceRankBound> {
    if m < 1 || m >= k || n < 1 {
        return Err(Error::InvalidRange(format!(
            "need 1 <= m < k and n >= 1, got m = {m}, k = {k}, n = {n}"
        )));
    }
    let degree = (q as u64 - 1) * n as u64 * m as u64 / k as u64;
    let monomials = monomial_count_int(q, n, degree);
    let bound = &monomials * BigUint::from(k);
    let c = c_constant(q, m as f64 / k as f64)?.value;
    Ok(SliceRankBound {
        q,
        m,
        k,
        n,
        degree,
        monomials,
        bound,
        c,
        nontrivial: 2 * m < k,
    })
}

/// Gaussian binomial `[n choose d]_q`; zero when `d > n`.
pub fn gaussian_binomial(q: u32, n: u32, d: u32) -> BigUint {
    if d > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= q.pow(n - i) - BigUint::one();
        den *= q.pow(d - i) - BigUint::one();
    }
    num / den
}

/// `q^{d(n−d)} ≤ [n choose d]_q ≤ 4 q^{d(n−d)}` for `d ≤ n`.
pub fn qbin_within_bounds(q: u32, n: u32, d: u32) -> bool {
    if d > n {
        return true;
    }
    let g = gaussian_binomial(q, n, d);
    let base = BigUint::from(q).pow(d * (n - d));
    base <= g && g <= base * BigUint::from(4u32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupersatParams {
    pub q: u32,
    pub r: u32,
    pub delta: f64,
    pub delta_prime: f64,
    pub n0: u64,
    pub n1: u64,
    pub epsilon: f64,
    pub c: f64,
    /// `log_q C`, meaningful even when `C` underflows.
    pub log_q_c: f64,
}

/// Constants of the supersaturation statement: with `n ≥ n1` and
/// `|S| ≥ q^{(1−δ′)n}`, at least `C q^{rn−εn}` solutions of affine rank `≥ r`.
pub fn supersat_params(q: u32, r: u32, delta: f64, delta_prime: f64, n0: u64) -> Result<SupersatParams> {
    if !(delta_prime > 0.0 && delta_prime < delta && delta <= 1.0) {
        return Err(Error::InvalidRange(format!(
            "need 0 < delta' < delta <= 1, got delta = {delta}, delta' = {delta_prime}"
        )));
    }
    if r < 1 || n0 < 1 || q < 2 {
        return Err(Error::InvalidRange("need r >= 1, n0 >= 1 and q >= 2".into()));
    }
    let qf = q as f64;
    let rf = r as f64;
    let n1 = ceil_with_slack(
        (delta / delta_prime * n0 as f64).max((2.0 + delta) / (delta - delta_prime)),
    );
    let epsilon = delta_prime * (rf - 1.0 + 2.0 * delta) / delta;
    let prefactor = (qf * qf - 2.0) / (4.0 * qf * qf);
    let exponent = -(rf - 1.0 + delta) * (2.0 + delta) / delta;
    let log_q_c = prefactor.ln() / qf.ln() + exponent;
    Ok(SupersatParams {
        q,
        r,
        delta,
        delta_prime,
        n0,
        n1,
        epsilon,
        c: prefactor * qf.powf(exponent),
        log_q_c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubspaceRow {
    pub d: u32,
    pub n_d: u64,
    pub c_d: f64,
    pub delta_d: f64,
}

/// Cap-set growth constant used for the `q = 3` base case.
pub const CAP_SET_BASE: f64 = 2.756;

/// Rows `1..=d` of the constants `(n_t, C_t, δ_t)` for which every
/// `S ⊆ F_q^n`, `n ≥ n_t`, `|S| ≥ C_t q^{(1−δ_t)n}` contains an affine
/// `t`-dimensional subspace.
pub fn subspace_constants(q: u32, d: u32) -> Result<Vec<SubspaceRow>> {
    let base = match q {
        3 => SubspaceRow {
            d: 1,
            n_d: 1,
            c_d: 3.0,
            delta_d: 1.0 - CAP_SET_BASE.ln() / 3f64.ln(),
        },
        2 => SubspaceRow {
            d: 1,
            n_d: 1,
            c_d: 2.0,
            delta_d: 1.0,
        },
        _ => {
            return Err(Error::UnsupportedField(format!(
                "subspace constants need q in {{2, 3}}, got {q}"
            )))
        }
    };
    if d < 1 {
        return Err(Error::InvalidRange("d must be at least 1".into()));
    }
    let mut rows = vec![base];
    for t in 2..=d {
        let prev = rows[rows.len() - 1];
        let s = 2.0 + base.delta_d + prev.delta_d;
        let delta_t = base.delta_d * prev.delta_d / s;
        let n_t = ceil_with_slack(
            (s / prev.delta_d * base.n_d as f64).max(s / (2.0 + base.delta_d) * prev.n_d as f64),
        );
        let row = SubspaceRow {
            d: t,
            n_d: n_t,
            c_d: q as f64 * (base.c_d + prev.c_d),
            delta_d: delta_t,
        };
        if !(row.delta_d > 0.0 && row.delta_d <= 1.0) {
            return Err(Error::InvariantViolated(format!(
                "delta_{t} = {} outside (0, 1]",
                row.delta_d
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}
