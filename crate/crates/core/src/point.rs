//! Points of `F_q^n` and their integer codes `Σ coords[i]·q^i`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<Elem>,
}

impl Point {
    pub fn new(coords: Vec<Elem>) -> Self {
        Point { coords }
    }

    pub fn zero(n: usize) -> Self {
        Point { coords: vec![0; n] }
    }

    /// The standard basis vector `e_i` of `F_q^n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut p = Point::zero(n);
        p.coords[i] = 1;
        p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn code(&self, q: u32) -> u64 {
        self.coords
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }

    pub fn from_code(code: u64, q: u32, n: usize) -> Self {
        let mut rest = code;
        let coords = (0..n)
            .map(|_| {
                let c = (rest % q as u64) as Elem;
                rest /= q as u64;
                c
            })
            .collect();
        Point { coords }
    }

    pub fn add(&self, f: &Field, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, f: &Field, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Point {
        Point::new(self.coords.iter().map(|&a| f.mul(c, a)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// `q^n`, or an error if it does not fit in `limit`.
pub fn space_size(q: u32, n: usize, limit: u64) -> Result<u64> {
    let mut size = 1u64;
    for _ in 0..n {
        size = size
            .checked_mul(q as u64)
            .filter(|&s| s <= limit)
            .ok_or_else(|| Error::SearchSpaceTooLarge(format!("{q}^{n} exceeds {limit}")))?;
    }
    Ok(size)
}

/// Every point of `F_q^n`, in code order.
pub fn all_points(q: u32, n: usize) -> impl Iterator<Item = Point> {
    let total = (q as u64).pow(n as u32);
    (0..total).map(move |c| Point::from_code(c, q, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn codes_are_a_bijection_on_small_spaces() {
        for (q, n) in [(2u32, 10usize), (3, 6), (4, 4), (5, 3), (7, 2), (9, 3)] {
            let total = (q as u64).pow(n as u32);
            let mut seen = vec![false; total as usize];
            for code in 0..total {
                let p = Point::from_code(code, q, n);
                assert!(p.coords().iter().all(|&c| c < q));
                assert_eq!(p.code(q), code);
                assert!(!seen[code as usize]);
                seen[code as usize] = true;
            }
        }
    }

    #[test]
    fn empty_vector_has_code_zero() {
        assert_eq!(Point::zero(0).code(3), 0);
        assert_eq!(all_points(3, 0).count(), 1);
    }

    proptest! {
        #[test]
        fn decode_encode_roundtrip(q in 2u32..20, coords in prop::collection::vec(0u32..20, 0..8)) {
            let p = Point::new(coords.into_iter().map(|c| c % q).collect());
            prop_assert_eq!(Point::from_code(p.code(q), q, p.dim()), p);
        }
    }
}
