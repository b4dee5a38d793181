//! Extending a tame matrix, one row (or, over `F_2`, a three-row gadget) at a
//! time, until it has shape `m′ × (2m′ + 1)`.
//!
//! New columns are always appended on the right, so the first `k` columns of every
//! output correspond to the original variables in their original order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::matrix::MatrixGF;
use crate::matroid::{self, set_of, ColumnMatroid};
use crate::systems;

pub const TIGHT_SET_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightSetReport {
    /// All `U ⊆ [k−1]` with `2 r(U) − 2m − 1 + k − |U| = 0`.
    pub tight_sets: Vec<Vec<usize>>,
    /// Intersection of all tight sets (itself tight).
    pub minimal: Vec<usize>,
    pub pivot: usize,
}

/// Slack `2 r(U) − 2m − 1 + k − |U|` of the tameness inequality on `U`.
fn slack(m: &ColumnMatroid, rows: usize, u: u64) -> i64 {
    2 * m.rank(u) as i64 - 2 * rows as i64 - 1 + m.len() as i64 - u.count_ones() as i64
}

fn require_tame_with_room(a: &MatrixGF) -> Result<()> {
    let (m, k) = (a.rows(), a.cols());
    if k < 2 * m + 2 {
        return Err(Error::PreconditionViolated(format!(
            "need k >= 2m + 2, got m = {m}, k = {k}"
        )));
    }
    if k > TIGHT_SET_LIMIT + 1 {
        return Err(Error::PreconditionViolated(format!(
            "tight-set enumeration supports at most {} columns",
            TIGHT_SET_LIMIT + 1
        )));
    }
    match matroid::is_tame(a) {
        Ok(c) if c.is_tame() => Ok(()),
        Ok(_) => Err(Error::PreconditionViolated("matrix is not tame".into())),
        Err(Error::NotFullRowRank { .. }) => Err(Error::PreconditionViolated(
            "matrix does not have full row rank".into(),
        )),
        Err(e) => Err(e),
    }
}

/// Tight subsets of the first `k − 1` columns and the pivot column they force.
pub fn tight_pivot(a: &MatrixGF) -> Result<TightSetReport> {
    require_tame_with_room(a)?;
    let cm = ColumnMatroid::new(a)?;
    let rows = a.rows();
    let k = a.cols();
    let mut tight = Vec::new();
    let mut minimal = (1u64 << (k - 1)) - 1;
    for u in 0..(1u64 << (k - 1)) {
        let s = slack(&cm, rows, u);
        if s < 0 {
            return Err(Error::InvariantViolated(format!(
                "negative slack on {:?} for a tame matrix",
                set_of(u)
            )));
        }
        if s == 0 {
            tight.push(u);
            minimal &= u;
        }
    }
    // the full set [k−1] is always tight for a tame matrix, and ∅ never is when k ≥ 2m+2
    if tight.is_empty() || minimal == 0 || slack(&cm, rows, minimal) != 0 {
        return Err(Error::InvariantViolated(format!(
            "tight sets do not have a nonempty tight intersection (minimal {:?})",
            set_of(minimal)
        )));
    }
    tight.sort_by_key(|&u| set_of(u));
    Ok(TightSetReport {
        tight_sets: tight.into_iter().map(set_of).collect(),
        minimal: set_of(minimal),
        pivot: minimal.trailing_zeros() as usize,
    })
}

/// Nonzero `(α, β, γ)` with `α + β + γ = 0`: `α = 1` and the smallest `β` that
/// leaves `γ = −1 − β` nonzero. Gives `(1, 1, −2)` in odd characteristic.
pub fn balanced_triple(f: &crate::field::Field) -> Option<(Elem, Elem, Elem)> {
    f.nonzero_elements().find_map(|beta| {
        let gamma = f.neg(f.add(1, beta));
        (gamma != 0).then_some((1, beta, gamma))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    pub pivot: usize,
    pub gadget: bool,
    pub coefficients: Option<[Elem; 3]>,
    pub shape_before: [usize; 2],
    pub shape_after: [usize; 2],
}

/// One extension step. Over `F_q`, `q ≠ 2`, appends the row `α e_i + β e_k` with
/// new column entry `γ`; over `F_2`, appends the three-row, five-column gadget.
/// Row balance is preserved, and `k − 2m` drops by one.
pub fn extend_step(a: &MatrixGF) -> Result<(MatrixGF, StepTrace)> {
    let report = tight_pivot(a)?;
    let i = report.pivot;
    let f = a.field();
    let (m, k) = (a.rows(), a.cols());
    let last = k - 1;
    let (out, coefficients) = if f.order() != 2 {
        let (alpha, beta, gamma) = balanced_triple(f).expect("q > 2 has a balanced triple");
        let mut out = MatrixGF::zeros(f, m + 1, k + 1);
        for r in 0..m {
            for c in 0..k {
                out.set(r, c, a.get(r, c));
            }
        }
        out.set(m, i, alpha);
        out.set(m, last, beta);
        out.set(m, k, gamma);
        (out, Some([alpha, beta, gamma]))
    } else {
        let mut out = MatrixGF::zeros(f, m + 3, k + 5);
        for r in 0..m {
            for c in 0..k {
                out.set(r, c, a.get(r, c));
            }
        }
        // e_i + e_k | 1 0 1 0 0
        // e_i       | 1 1 0 1 0
        // e_k       | 1 1 0 0 1
        let gadget: [[Elem; 5]; 3] = [[1, 0, 1, 0, 0], [1, 1, 0, 1, 0], [1, 1, 0, 0, 1]];
        out.set(m, i, 1);
        out.set(m, last, 1);
        out.set(m + 1, i, 1);
        out.set(m + 2, last, 1);
        for (r, row) in gadget.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                out.set(m + r, k + c, v);
            }
        }
        (out, None)
    };
    let trace = StepTrace {
        pivot: i,
        gadget: coefficients.is_none(),
        coefficients,
        shape_before: [m, k],
        shape_after: [out.rows(), out.cols()],
    };
    Ok((out, trace))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalized {
    #[serde(skip)]
    pub matrix: MatrixGF,
    pub steps: Vec<StepTrace>,
    /// Whether the generic witness of the output was checked to restrict to a
    /// generic solution of the input (only for balanced inputs).
    pub projection_checked: bool,
}

/// Extends a tame matrix with `k ≥ 2m + 1` to a tame `m′ × (2m′ + 1)` matrix. For
/// balanced input the output is balanced, and the low-dimensional generic solution
/// of the output, restricted to the first `k` coordinates, is a generic solution
/// of the input.
pub fn normalize_to_tame_square(a: &MatrixGF) -> Result<Normalized> {
    let (m, k) = (a.rows(), a.cols());
    if k < 2 * m + 1 {
        return Err(Error::PreconditionViolated(format!(
            "need k >= 2m + 1, got m = {m}, k = {k}"
        )));
    }
    let mut current = a.clone();
    let mut steps = Vec::new();
    if k == 2 * m + 1 {
        // still require tameness of the input
        require_tame(&current)?;
    }
    while current.cols() > 2 * current.rows() + 1 {
        let before = current.cols() as i64 - 2 * current.rows() as i64;
        let (next, trace) = extend_step(&current)?;
        let after = next.cols() as i64 - 2 * next.rows() as i64;
        if after != before - 1 || !matroid::is_tame(&next)?.is_tame() {
            return Err(Error::InvariantViolated(format!(
                "extension step at pivot {} did not produce a tame matrix with k - 2m = {}",
                trace.pivot,
                before - 1
            )));
        }
        steps.push(trace);
        current = next;
    }
    let balanced = systems::is_row_balanced(a);
    if balanced {
        if !systems::is_row_balanced(&current) {
            return Err(Error::InvariantViolated("extension lost row balance".into()));
        }
        let witness = systems::generic_witness_lowdim(&current)?;
        let head: Vec<usize> = (0..k).collect();
        let projected = witness.select(&head);
        if !systems::classify_solution(a, &projected)?.is_generic {
            return Err(Error::InvariantViolated(
                "generic witness of the extension does not project to a generic solution".into(),
            ));
        }
    }
    Ok(Normalized {
        matrix: current,
        steps,
        projection_checked: balanced,
    })
}

fn require_tame(a: &MatrixGF) -> Result<()> {
    match matroid::is_tame(a) {
        Ok(c) if c.is_tame() => Ok(()),
        Ok(_) => Err(Error::PreconditionViolated("matrix is not tame".into())),
        Err(Error::NotFullRowRank { .. }) => Err(Error::PreconditionViolated(
            "matrix does not have full row rank".into(),
        )),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn mat(q: u64, rows: &[Vec<i64>]) -> MatrixGF {
        MatrixGF::from_i64_rows(&Field::of_order(q).unwrap(), rows).unwrap()
    }

    #[test]
    fn tight_sets_of_all_ones_row() {
        for q in [2, 3] {
            let r = tight_pivot(&mat(q, &[vec![1, 1, 1, 1]])).unwrap();
            assert_eq!(r.tight_sets, vec![vec![0, 1, 2]]);
            assert_eq!(r.minimal, vec![0, 1, 2]);
            assert_eq!(r.pivot, 0);
        }
    }

    #[test]
    fn tight_pivot_needs_room() {
        assert!(matches!(
            tight_pivot(&mat(3, &[vec![1, 1, 1]])),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn step_over_f3() {
        let (out, trace) = extend_step(&mat(3, &[vec![1, 1, 1, 1]])).unwrap();
        assert_eq!(out.row_vecs(), vec![vec![1, 1, 1, 1, 0], vec![1, 0, 0, 1, 1]]);
        assert_eq!(trace.coefficients, Some([1, 1, 1]));
        assert!(matroid::is_tame(&out).unwrap().is_tame());
    }

    #[test]
    fn step_over_f2_uses_gadget() {
        let (out, trace) = extend_step(&mat(2, &[vec![1, 1, 1, 1]])).unwrap();
        assert!(trace.gadget);
        assert_eq!((out.rows(), out.cols()), (4, 9));
        assert_eq!(
            out.row_vecs(),
            vec![
                vec![1, 1, 1, 1, 0, 0, 0, 0, 0],
                vec![1, 0, 0, 1, 1, 0, 1, 0, 0],
                vec![1, 0, 0, 0, 1, 1, 0, 1, 0],
                vec![0, 0, 0, 1, 1, 1, 0, 0, 1],
            ]
        );
        assert!(matroid::is_tame(&out).unwrap().is_tame());
        assert!(systems::is_row_balanced(&out));
        assert_eq!(out.rank(), 4);
    }

    #[test]
    fn balanced_triples() {
        assert_eq!(balanced_triple(&Field::of_order(5).unwrap()), Some((1, 1, 3)));
        assert_eq!(balanced_triple(&Field::of_order(4).unwrap()), Some((1, 2, 3)));
        assert_eq!(balanced_triple(&Field::of_order(2).unwrap()), None);
    }

    #[test]
    fn normalize_examples() {
        let a = mat(3, &[vec![1, 1, 1]]);
        let n = normalize_to_tame_square(&a).unwrap();
        assert_eq!(n.matrix, a);
        assert!(n.steps.is_empty());

        // not balanced over F_3, so only the shape and tameness are checked
        let n = normalize_to_tame_square(&mat(3, &[vec![1, 1, 1, 1]])).unwrap();
        assert_eq!((n.matrix.rows(), n.matrix.cols()), (2, 5));
        assert!(!n.projection_checked);

        let n = normalize_to_tame_square(&mat(5, &[vec![1, 1, 1, 1, 1]])).unwrap();
        assert_eq!((n.matrix.rows(), n.matrix.cols()), (3, 7));
        assert_eq!(n.steps.len(), 2);
        assert!(n.projection_checked);

        let n = normalize_to_tame_square(&mat(5, &[vec![1, 1, 1, 1, 1, 1]])).unwrap();
        assert_eq!((n.matrix.rows(), n.matrix.cols()), (4, 9));
        assert_eq!(n.steps.len(), 3);

        let n = normalize_to_tame_square(&mat(2, &[vec![1, 1, 1, 1, 1, 1]])).unwrap();
        assert_eq!(n.matrix.cols(), 2 * n.matrix.rows() + 1);
        assert!(n.projection_checked);
    }
}
