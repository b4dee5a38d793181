//! Balanced systems `A xᵀ = 0`: affine relations of a tuple, affine rank, solution
//! classification, low-dimensional generic solutions, disjoint full-rank index
//! sets for low-rank solutions, and affine copies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::MatrixGF;
use crate::matroid::{self, mask_of, set_of, ColumnMatroid};
use crate::point::Point;

/// An ordered tuple `(x_1, …, x_k)` of points of `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionTuple {
    #[serde(skip)]
    field: Field,
    n: usize,
    points: Vec<Point>,
}

impl SolutionTuple {
    pub fn new(field: &Field, n: usize, points: Vec<Point>) -> Result<Self> {
        for p in &points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.dim(),
                });
            }
            if p.coords().iter().any(|&c| c >= field.order()) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(SolutionTuple {
            field: field.clone(),
            n,
            points,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    /// The subtuple on the given indices, in order.
    pub fn select(&self, idx: &[usize]) -> SolutionTuple {
        SolutionTuple {
            field: self.field.clone(),
            n: self.n,
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// The `(n+1) × k` matrix with a row of ones above the points as columns.
    pub fn augmented_matrix(&self) -> MatrixGF {
        let mut m = MatrixGF::zeros(&self.field, self.n + 1, self.k());
        for (c, p) in self.points.iter().enumerate() {
            m.set(0, c, 1);
            for (r, &x) in p.coords().iter().enumerate() {
                m.set(r + 1, c, x);
            }
        }
        m
    }

    /// The `k × n` matrix with the points as rows.
    pub fn point_matrix(&self) -> MatrixGF {
        let mut m = MatrixGF::zeros(&self.field, self.k(), self.n);
        for (r, p) in self.points.iter().enumerate() {
            for (c, &x) in p.coords().iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }
}

pub fn is_row_balanced(a: &MatrixGF) -> bool {
    (0..a.rows()).all(|r| a.field().sum(a.row(r)) == 0)
}

/// Basis (as matrix rows) of `Ann_bal(x) = {μ : Σ μ_i x_i = 0, Σ μ_i = 0}`.
pub fn ann_bal_basis(x: &SolutionTuple) -> MatrixGF {
    x.augmented_matrix().kernel_matrix()
}

pub fn affine_rank(x: &SolutionTuple) -> usize {
    x.augmented_matrix().rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionClass {
    pub arank: usize,
    pub ann_dim: usize,
    pub is_solution: bool,
    pub is_trivial: bool,
    pub is_shape: bool,
    pub is_generic: bool,
}

fn check_system(a: &MatrixGF) -> Result<()> {
    matroid::require_full_row_rank(a)?;
    if !is_row_balanced(a) {
        return Err(Error::NotBalanced);
    }
    Ok(())
}

/// `A xᵀ = 0`, i.e. every row `a` satisfies `Σ a_j x_j = 0` in `F_q^n`.
pub fn is_solution(a: &MatrixGF, x: &SolutionTuple) -> Result<bool> {
    if a.cols() != x.k() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            got: x.k(),
        });
    }
    if a.field() != x.field() {
        return Err(Error::FieldMismatch);
    }
    let prod = a.mul(&x.point_matrix())?;
    Ok(prod.is_zero())
}

pub fn classify_solution(a: &MatrixGF, x: &SolutionTuple) -> Result<SolutionClass> {
    check_system(a)?;
    let is_solution = is_solution(a, x)?;
    let k = x.k();
    let arank = affine_rank(x);
    let ann_dim = k - arank;
    let pts = x.points();
    let is_trivial = pts.windows(2).all(|w| w[0] == w[1]);
    let is_shape = k >= 2 && (0..k).all(|i| (i + 1..k).all(|j| pts[i] != pts[j]));
    let is_generic = is_solution && arank == k - a.rows();
    Ok(SolutionClass {
        arank,
        ann_dim,
        is_solution,
        is_trivial,
        is_shape,
        is_generic,
    })
}

/// Generic solution via the definition: `Ann_bal(x)` equals the row space of `A`.
pub fn is_generic_by_annihilator(a: &MatrixGF, x: &SolutionTuple) -> Result<bool> {
    Ok(is_solution(a, x)? && ann_bal_basis(x).same_row_space(a)?)
}

/// A generic solution in `F_q^{k−m−1}`: bring `A` to `(I | B)` on its pivot
/// columns, send the last free column to `0` and the other free columns to the
/// unit vectors, and solve for the pivot columns.
pub fn generic_witness_lowdim(a: &MatrixGF) -> Result<SolutionTuple> {
    check_system(a)?;
    let f = a.field();
    let (m, k) = (a.rows(), a.cols());
    if k < m + 1 {
        return Err(Error::PreconditionViolated(format!(
            "need k >= m + 1, got m = {m}, k = {k}"
        )));
    }
    let dim = k - m - 1;
    let rref = a.rref();
    let mut is_pivot = vec![false; k];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..k).filter(|&c| !is_pivot[c]).collect();
    let mut points = vec![Point::zero(dim); k];
    for (t, &c) in free.iter().enumerate().take(dim) {
        points[c] = Point::unit(dim, t);
    }
    for (r, &p) in rref.pivots.iter().enumerate() {
        let mut z = vec![0; dim];
        for &c in &free {
            f.axpy(&mut z, f.neg(rref.matrix.get(r, c)), points[c].coords());
        }
        points[p] = Point::new(z);
    }
    SolutionTuple::new(f, dim, points)
}

/// Rows of `A` extended greedily by kernel vectors of the augmented tuple matrix
/// to a basis of `Ann_bal(x)`.
pub fn extend_rows_to_annihilator(a: &MatrixGF, x: &SolutionTuple) -> Result<MatrixGF> {
    let ann = ann_bal_basis(x);
    let mut ext = a.clone();
    let mut rank = ext.rank();
    for v in ann.row_vecs() {
        let mut trial = ext.clone();
        trial.push_row(&v)?;
        let r = trial.rank();
        if r > rank {
            ext = trial;
            rank = r;
        }
    }
    if rank != ann.rows() {
        return Err(Error::InvariantViolated(
            "rows of A do not lie in the annihilator of the solution".into(),
        ));
    }
    Ok(ext)
}

/// For a solution `x` of affine rank `r ≤ m` of a tame balanced `m × (2m+1)` system,
/// disjoint `I1, I2` of size `r` with both subtuples of affine rank `r`.
pub fn disjoint_rank_sets(a: &MatrixGF, x: &SolutionTuple) -> Result<(Vec<usize>, Vec<usize>)> {
    check_system(a)?;
    let (m, k) = (a.rows(), a.cols());
    if k != 2 * m + 1 {
        return Err(Error::PreconditionViolated(format!(
            "expected an m x (2m+1) matrix, got {m} x {k}"
        )));
    }
    if !matroid::is_tame(a)?.is_tame() {
        return Err(Error::PreconditionViolated("matrix is not tame".into()));
    }
    if !is_solution(a, x)? {
        return Err(Error::PreconditionViolated("tuple is not a solution".into()));
    }
    let r = affine_rank(x);
    if r > m {
        return Err(Error::PreconditionViolated(format!(
            "affine rank {r} exceeds m = {m}"
        )));
    }
    disjoint_rank_sets_prechecked(a, x, r)
}

/// `disjoint_rank_sets` for callers that already checked the shape, tameness
/// and that `x` is a solution of affine rank `r ≤ m`.
pub(crate) fn disjoint_rank_sets_prechecked(
    a: &MatrixGF,
    x: &SolutionTuple,
    r: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let m = a.rows();
    let extended = extend_rows_to_annihilator(a, x)?;
    let top = extended.top_rows(m + 1);
    let (j1, j2) = matroid::covering_bases(&top)?;
    let cm = ColumnMatroid::new(&extended)?;
    let full = cm.full_mask();
    let b1 = cm.greedy_extend(mask_of(&j1), full);
    let b2 = cm.greedy_extend(mask_of(&j2), full);
    let i1 = set_of(full & !b1);
    let i2 = set_of(full & !b2);
    let ok = i1.len() == r
        && i2.len() == r
        && mask_of(&i1) & mask_of(&i2) == 0
        && affine_rank(&x.select(&i1)) == r
        && affine_rank(&x.select(&i2)) == r;
    if !ok {
        return Err(Error::InvariantViolated(format!(
            "disjoint rank sets {i1:?}, {i2:?} fail for affine rank {r}"
        )));
    }
    Ok((i1, i2))
}

/// Whether `x ∈ (F_q^n)^k` is an affine copy of `z ∈ (F_q^r)^k`: some injective
/// linear `L` and shift `a` give `x_i = L(z_i) + a`.
pub fn is_affine_copy(z: &SolutionTuple, x: &SolutionTuple) -> Result<bool> {
    if z.k() != x.k() {
        return Err(Error::LengthMismatch(z.k(), x.k()));
    }
    if z.field() != x.field() {
        return Err(Error::FieldMismatch);
    }
    // no injective linear map F_q^r -> F_q^n exists when n < r
    if x.n() < z.n() {
        return Ok(false);
    }
    ann_bal_basis(z).same_row_space(&ann_bal_basis(x))
}

/// Applies `x ↦ L x + shift` pointwise, with `L` given as an `n × r` matrix.
pub fn apply_affine_map(z: &SolutionTuple, l: &MatrixGF, shift: &Point) -> Result<SolutionTuple> {
    if l.cols() != z.n() {
        return Err(Error::DimensionMismatch {
            expected: z.n(),
            got: l.cols(),
        });
    }
    let f = z.field();
    let pts = z
        .points()
        .iter()
        .map(|p| Ok(Point::new(l.mul_vec(p.coords())?).add(f, shift)))
        .collect::<Result<Vec<_>>>()?;
    SolutionTuple::new(f, l.rows(), pts)
}

/// Helper for building tuples from raw coordinates.
pub fn tuple_from_coords(field: &Field, n: usize, coords: &[Vec<Elem>]) -> Result<SolutionTuple> {
    SolutionTuple::new(field, n, coords.iter().cloned().map(Point::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    fn mat(q: u64, rows: &[Vec<i64>]) -> MatrixGF {
        MatrixGF::from_i64_rows(&f(q), rows).unwrap()
    }

    fn tuple1(q: u64, xs: &[u32]) -> SolutionTuple {
        let coords: Vec<Vec<Elem>> = xs.iter().map(|&x| vec![x]).collect();
        tuple_from_coords(&f(q), 1, &coords).unwrap()
    }

    #[test]
    fn balance() {
        assert!(is_row_balanced(&mat(3, &[vec![1, 1, 1]])));
        assert!(!is_row_balanced(&mat(5, &[vec![1, 1, 1]])));
        for q in [3, 5, 7] {
            assert!(is_row_balanced(&mat(q, &[vec![1, -2, 1, 0], vec![0, 1, -2, 1]])));
        }
    }

    #[test]
    fn annihilator_examples() {
        let v = vec![1, 2];
        let pair = tuple_from_coords(&f(5), 2, &[v.clone(), v.clone()]).unwrap();
        let ann = ann_bal_basis(&pair);
        assert_eq!(ann.rows(), 1);
        assert!(ann.row_space_contains(&[1, 4]).unwrap());

        let triple = tuple_from_coords(&f(5), 2, &[v.clone(), v.clone(), v]).unwrap();
        assert_eq!(ann_bal_basis(&triple).rows(), 2);
        assert_eq!(affine_rank(&triple), 1);

        let ap = tuple1(3, &[0, 1, 2]);
        let ann = ann_bal_basis(&ap);
        assert_eq!(ann.rows(), 1);
        assert!(ann.row_space_contains(&[1, 1, 1]).unwrap());
        assert_eq!(affine_rank(&ap), 2);
    }

    #[test]
    fn affinely_independent_tuple_has_full_rank() {
        let f5 = f(5);
        let mut pts = vec![Point::zero(3)];
        pts.extend((0..3).map(|i| Point::unit(3, i)));
        let x = SolutionTuple::new(&f5, 3, pts).unwrap();
        assert_eq!(affine_rank(&x), 4);
    }

    #[test]
    fn classification_examples() {
        let a = mat(3, &[vec![1, 1, 1]]);
        let c = classify_solution(&a, &tuple1(3, &[1, 1, 1])).unwrap();
        assert!(c.is_solution && c.is_trivial && !c.is_shape && !c.is_generic);

        let c = classify_solution(&a, &tuple1(3, &[0, 1, 2])).unwrap();
        assert!(c.is_solution && c.is_shape && c.is_generic && !c.is_trivial);
        assert_eq!(c.arank, 2);

        let c = classify_solution(&a, &tuple1(3, &[0, 0, 1])).unwrap();
        assert!(!c.is_solution && !c.is_generic);

        assert!(matches!(
            classify_solution(&a, &tuple1(3, &[0, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_variable_is_never_a_shape() {
        let a = MatrixGF::empty(&f(3), 1);
        let c = classify_solution(&a, &tuple1(3, &[2])).unwrap();
        assert!(!c.is_shape && c.is_trivial);
    }

    #[test]
    fn generic_witness_examples() {
        let w = generic_witness_lowdim(&mat(3, &[vec![1, 1, 1]])).unwrap();
        assert_eq!(w, tuple1(3, &[2, 1, 0]));

        let ap4 = mat(5, &[vec![1, -2, 1, 0], vec![0, 1, -2, 1]]);
        let w = generic_witness_lowdim(&ap4).unwrap();
        assert_eq!(w, tuple1(5, &[3, 2, 1, 0]));
        assert_eq!(affine_rank(&w), 2);

        let w = generic_witness_lowdim(&mat(2, &[vec![1, 1]])).unwrap();
        assert_eq!(w.n(), 0);
        assert_eq!(affine_rank(&w), 1);

        assert_eq!(
            generic_witness_lowdim(&mat(5, &[vec![1, 1, 1]])).unwrap_err(),
            Error::NotBalanced
        );
    }

    #[test]
    fn disjoint_sets_for_trivial_solution() {
        let a = mat(3, &[vec![1, 1, 1]]);
        let (i1, i2) = disjoint_rank_sets(&a, &tuple1(3, &[2, 2, 2])).unwrap();
        assert_eq!(i1.len(), 1);
        assert_eq!(i2.len(), 1);
        assert_ne!(i1, i2);
    }

    #[test]
    fn disjoint_sets_reject_untame() {
        let a = mat(5, &[vec![1, -1, 0, 0, 0], vec![0, 0, 1, 1, 3]]);
        assert!(!matroid::is_tame(&a).unwrap().is_tame());
        let x = tuple1(5, &[1, 1, 1, 1, 1]);
        assert!(matches!(
            disjoint_rank_sets(&a, &x),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn affine_copy_examples() {
        let z = tuple1(3, &[0, 1, 2]);
        let f3 = f(3);
        let v = Point::new(vec![1, 0]);
        let w = Point::new(vec![2, 1]);
        let x = SolutionTuple::new(
            &f3,
            2,
            vec![v.clone(), v.add(&f3, &w), v.add(&f3, &w.scale(&f3, 2))],
        )
        .unwrap();
        assert!(is_affine_copy(&z, &x).unwrap());

        let flat = SolutionTuple::new(&f3, 2, vec![v.clone(), v.clone(), v]).unwrap();
        assert!(!is_affine_copy(&z, &flat).unwrap());

        assert_eq!(
            is_affine_copy(&z, &tuple1(3, &[0, 1])).unwrap_err(),
            Error::LengthMismatch(3, 2)
        );
    }
}
