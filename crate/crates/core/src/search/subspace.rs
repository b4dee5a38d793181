use serde::Serialize;

use super::pointset::PointSet;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::point::Point;

/// Largest `q^n` for an exhaustive subspace search.
pub const SUBSPACE_SPACE_LIMIT: u64 = 1 << 14;
/// Largest dimension searched for.
pub const SUBSPACE_DIM_LIMIT: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineSubspace {
    pub base: Point,
    pub directions: Vec<Point>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Codes of all `q^d` points.
    pub fn point_codes(&self, set: &PointSet) -> Vec<u64> {
        let f = set.field();
        let q = f.order();
        let mut pts = vec![self.base.clone()];
        for v in &self.directions {
            let mut next = Vec::with_capacity(pts.len() * q as usize);
            for p in &pts {
                for c in f.elements() {
                    next.push(p.add(f, &v.scale(f, c)));
                }
            }
            pts = next;
        }
        let mut codes: Vec<u64> = pts.iter().map(|p| p.code(q)).collect();
        codes.sort_unstable();
        codes
    }
}

struct Finder<'a> {
    set: &'a PointSet,
    d: usize,
    base: Vec<Elem>,
}

impl Finder<'_> {
    fn offset_code(&self, v: &[Elem]) -> u64 {
        let f = self.set.field();
        let q = f.order() as u64;
        self.base
            .iter()
            .zip(v)
            .rev()
            .fold(0u64, |acc, (&b, &x)| acc * q + f.add(b, x) as u64)
    }

    /// `span`: all vectors of the current linear part; `dirs`: chosen direction codes.
    fn extend(&self, cands: &[(u64, Vec<Elem>)], from: usize, span: &[Vec<Elem>], dirs: &mut Vec<usize>) -> bool {
        if dirs.len() == self.d {
            return true;
        }
        let f = self.set.field();
        for (idx, (_, v)) in cands.iter().enumerate().skip(from) {
            if span.contains(v) {
                continue;
            }
            let mut grown = Vec::with_capacity(span.len() * f.order() as usize);
            let mut ok = true;
            'outer: for w in span {
                for c in f.elements() {
                    let mut u = w.clone();
                    f.axpy(&mut u, c, v);
                    if c != 0 && !self.set.contains(self.offset_code(&u)) {
                        ok = false;
                        break 'outer;
                    }
                    grown.push(u);
                }
            }
            if !ok {
                continue;
            }
            dirs.push(idx);
            if self.extend(cands, idx + 1, &grown, dirs) {
                return true;
            }
            dirs.pop();
        }
        false
    }
}

/// An affine `d`-dimensional subspace contained in `S`, or `None` after an
/// exhaustive search.
///
/// The base point is taken to be the member of smallest code, so only
/// directions towards larger codes are tried, and directions are added in
/// increasing code order.
pub fn find_affine_subspace(set: &PointSet, d: usize) -> Result<Option<AffineSubspace>> {
    let n = set.n();
    if d > n {
        return Err(Error::InvalidRange(format!("dimension {d} exceeds n = {n}")));
    }
    if set.space_size() > SUBSPACE_SPACE_LIMIT || d > SUBSPACE_DIM_LIMIT {
        return Err(Error::SearchSpaceTooLarge(format!(
            "subspace search needs q^n <= {SUBSPACE_SPACE_LIMIT} and d <= {SUBSPACE_DIM_LIMIT}"
        )));
    }
    let f = set.field();
    let q = f.order() as u64;
    let needed = q.pow(d as u32);
    if (set.len() as u64) < needed {
        return Ok(None);
    }
    for &b in set.elements() {
        let base = set.point(b);
        let cands: Vec<(u64, Vec<Elem>)> = set
            .elements()
            .iter()
            .filter(|&&s| s > b)
            .map(|&s| {
                let v = set.point(s).sub(f, &base);
                (v.code(f.order()), v.coords().to_vec())
            })
            .collect();
        let mut cands = cands;
        cands.sort();
        let finder = Finder {
            set,
            d,
            base: base.coords().to_vec(),
        };
        let mut dirs = Vec::new();
        if finder.extend(&cands, 0, &[vec![0; n]], &mut dirs) {
            return Ok(Some(AffineSubspace {
                base,
                directions: dirs.iter().map(|&i| Point::new(cands[i].1.clone())).collect(),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(set: &PointSet, sub: &AffineSubspace, d: usize) {
        let codes = sub.point_codes(set);
        let q = set.field().order() as u64;
        let mut dedup = codes.clone();
        dedup.dedup();
        assert_eq!(dedup.len() as u64, q.pow(d as u32));
        assert!(codes.iter().all(|&c| set.contains(c)));
    }

    #[test]
    fn whole_space() {
        let f = Field::of_order(2).unwrap();
        let s = PointSet::full(&f, 3).unwrap();
        let sub = find_affine_subspace(&s, 3).unwrap().unwrap();
        check(&s, &sub, 3);
    }

    #[test]
    fn too_few_points() {
        let f = Field::of_order(3).unwrap();
        let s = PointSet::from_codes(&f, 2, [0, 4]).unwrap();
        assert_eq!(find_affine_subspace(&s, 1).unwrap(), None);
    }

    #[test]
    fn planted_lines_are_recovered() {
        let f = Field::of_order(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let base = Point::from_code(rng.gen_range(0..81), 3, 4);
            let dir = Point::from_code(rng.gen_range(1..81), 3, 4);
            let line = AffineSubspace {
                base,
                directions: vec![dir],
            };
            let full = PointSet::full(&f, 4).unwrap();
            let mut codes = line.point_codes(&full);
            codes.extend(sample(&mut rng, 81, 37).into_iter().map(|c| c as u64));
            let s = PointSet::from_codes(&f, 4, codes).unwrap();
            let found = find_affine_subspace(&s, 1).unwrap().expect("planted line");
            check(&s, &found, 1);
        }
    }

    #[test]
    fn exhaustive_absence_matches_brute_force() {
        // cap sets in F_3^2 contain no line; compare against all lines
        let f = Field::of_order(3).unwrap();
        let s = PointSet::from_codes(&f, 2, [0, 1, 3, 4]).unwrap();
        assert_eq!(find_affine_subspace(&s, 1).unwrap(), None);
        let t = PointSet::from_codes(&f, 2, [0, 1, 2, 4]).unwrap();
        let sub = find_affine_subspace(&t, 1).unwrap().unwrap();
        assert_eq!(sub.point_codes(&t), vec![0, 1, 2]);
    }

    #[test]
    fn limits() {
        let f = Field::of_order(2).unwrap();
        let s = PointSet::full(&f, 4).unwrap();
        assert!(matches!(find_affine_subspace(&s, 4), Err(Error::SearchSpaceTooLarge(_))));
        assert!(matches!(find_affine_subspace(&s, 5), Err(Error::InvalidRange(_))));
    }
}
