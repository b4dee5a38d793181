use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::point::{space_size, Point};

/// Largest ambient space `q^n` for which point sets are materialised.
pub const MAX_SPACE: u64 = 1 << 24;

/// A subset of `F_q^n`, kept both as a membership bitmap over codes and as the
/// sorted list of member codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSet {
    #[serde(skip)]
    field: Field,
    n: usize,
    #[serde(skip)]
    membership: Vec<bool>,
    elements: Vec<u64>,
}

impl PointSet {
    pub fn from_codes(field: &Field, n: usize, codes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let size = space_size(field.order(), n, MAX_SPACE)?;
        let mut membership = vec![false; size as usize];
        for c in codes {
            if c >= size {
                return Err(Error::Parse(format!("code {c} outside [0, {size})")));
            }
            membership[c as usize] = true;
        }
        let elements = (0..size).filter(|&c| membership[c as usize]).collect();
        Ok(PointSet {
            field: field.clone(),
            n,
            membership,
            elements,
        })
    }

    pub fn from_points(field: &Field, n: usize, points: &[Point]) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.dim(),
            });
        }
        Self::from_codes(field, n, points.iter().map(|p| p.code(field.order())))
    }

    pub fn full(field: &Field, n: usize) -> Result<Self> {
        let size = space_size(field.order(), n, MAX_SPACE)?;
        Self::from_codes(field, n, 0..size)
    }

    pub fn empty(field: &Field, n: usize) -> Result<Self> {
        Self::from_codes(field, n, std::iter::empty())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q^n`.
    pub fn space_size(&self) -> u64 {
        self.membership.len() as u64
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    #[inline]
    pub fn contains(&self, code: u64) -> bool {
        self.membership.get(code as usize).copied().unwrap_or(false)
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        p.dim() == self.n && self.contains(p.code(self.field.order()))
    }

    pub fn point(&self, code: u64) -> Point {
        Point::from_code(code, self.field.order(), self.n)
    }

    pub fn points(&self) -> Vec<Point> {
        self.elements.iter().map(|&c| self.point(c)).collect()
    }

    /// Position of `code` in the sorted element list.
    pub fn index_of(&self, code: u64) -> Option<usize> {
        self.elements.binary_search(&code).ok()
    }
}
