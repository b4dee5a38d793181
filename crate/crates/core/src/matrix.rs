//! Dense matrices over a finite field and exact elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixGF {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixGF,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl MatrixGF {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        MatrixGF {
            field: field.clone(),
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from canonical entries; every entry must be `< q`.
    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= field.order()) {
                return Err(Error::Parse(format!("{bad} is not an element of {field}")));
            }
            entries.extend_from_slice(row);
        }
        Ok(MatrixGF {
            field: field.clone(),
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix from integer literals, reducing negatives as in [`Field::from_i64`].
    pub fn from_i64_rows(field: &Field, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, &rows)
    }

    /// An empty matrix with `cols` columns.
    pub fn empty(field: &Field, cols: usize) -> Self {
        Self::zeros(field, 0, cols)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn push_row(&mut self, row: &[Elem]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: row.len(),
            });
        }
        self.entries.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.cols,
            });
        }
        let mut m = Self::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        Ok(m)
    }

    /// The first `n` rows.
    pub fn top_rows(&self, n: usize) -> Self {
        let n = n.min(self.rows);
        MatrixGF {
            field: self.field.clone(),
            rows: n,
            cols: self.cols,
            entries: self.entries[..n * self.cols].to_vec(),
        }
    }

    /// `M · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows).map(|r| self.field.dot(self.row(r), v)).collect())
    }

    pub fn mul(&self, other: &MatrixGF) -> Result<MatrixGF> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.entries[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                f.axpy(dst, self.get(r, k), other.row(k));
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Reduced row-echelon form. Pivots are the first nonzero entry found scanning
    /// columns left to right, so the result is deterministic.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        Rref {
            matrix: m,
            rank,
            pivots,
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..cols {
                    self.entries.swap(pr * cols + j, row * cols + j);
                }
            }
            let inv = f.inv(self.get(row, c));
            for j in c..cols {
                let v = self.get(row, j);
                self.set(row, j, f.mul(v, inv));
            }
            let pivot_row: Vec<Elem> = self.row(row).to_vec();
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, c);
                if factor != 0 {
                    let dst = &mut self.entries[r * cols..(r + 1) * cols];
                    f.axpy(dst, f.neg(factor), &pivot_row);
                }
            }
            pivots.push(c);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A basis of `{v : M v = 0}`, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vec<Elem>> {
        let Rref { matrix, pivots, .. } = self.rref();
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(matrix.get(r, free));
                }
                v
            })
            .collect()
    }

    /// The kernel basis stacked as the rows of a matrix.
    pub fn kernel_matrix(&self) -> MatrixGF {
        let basis = self.kernel_basis();
        let mut m = MatrixGF::empty(&self.field, self.cols);
        for v in basis {
            m.push_row(&v).expect("kernel vectors have cols entries");
        }
        m
    }

    /// Whether `v` is an `F_q`-combination of the rows.
    pub fn row_space_contains(&self, v: &[Elem]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let base = self.rank();
        let mut ext = self.clone();
        ext.push_row(v)?;
        Ok(ext.rank() == base)
    }

    /// Whether both matrices span the same row space.
    pub fn same_row_space(&self, other: &MatrixGF) -> Result<bool> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let a = self.rref();
        let b = other.rref();
        Ok(a.rank == b.rank && a.matrix.top_rows(a.rank) == b.matrix.top_rows(b.rank))
    }

    /// Renders in the text matrix format (`q=` header plus one row per line).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = &self.field;
        match f.modulus() {
            None => s.push_str(&format!("q={}\n", f.order())),
            Some(m) => {
                let poly: Vec<String> = m.iter().map(u32::to_string).collect();
                s.push_str(&format!(
                    "q={}^{} poly={}\n",
                    f.characteristic(),
                    f.degree(),
                    poly.join(",")
                ));
            }
        }
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}
