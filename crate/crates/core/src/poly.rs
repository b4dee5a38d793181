//! Multivariate polynomials over `F_q`, reduced as functions (`x^q = x`).

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    nvars: usize,
    /// exponent vector -> nonzero coefficient
    terms: BTreeMap<Vec<u32>, Elem>,
}

impl Poly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        Poly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: Elem) -> Self {
        let mut p = Poly::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(field, nvars);
        p.add_term(e, 1);
        p
    }

    /// Builds from `(coefficient, exponents)` pairs; exponents must be below `q`.
    pub fn from_terms(field: &Field, nvars: usize, terms: &[(Elem, Vec<u32>)]) -> Result<Self> {
        let mut p = Poly::zero(field, nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if let Some(&x) = e.iter().find(|&&x| x >= field.order()) {
                return Err(Error::DegreeTooHigh {
                    degree: x as u64,
                    limit: field.order() as u64 - 1,
                });
            }
            if *c >= field.order() {
                return Err(Error::FieldMismatch);
            }
            p.add_term(e.clone(), *c);
        }
        Ok(p)
    }

    /// Every monomial with exponents below `q` and total degree at most `d`
    /// gets an independent uniform coefficient.
    pub fn random<R: Rng>(field: &Field, nvars: usize, d: u64, rng: &mut R) -> Self {
        let q = field.order();
        let mut p = Poly::zero(field, nvars);
        let mut e = vec![0u32; nvars];
        loop {
            if e.iter().map(|&x| x as u64).sum::<u64>() <= d {
                p.add_term(e.clone(), rng.gen_range(0..q));
            }
            let mut i = 0;
            while i < nvars {
                e[i] += 1;
                if e[i] < q {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
            if i == nvars {
                return p;
            }
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: Elem) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        let slot = self.terms.entry(e).or_insert(0);
        *slot = f.add(*slot, c);
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Elem)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, &c) in &other.terms {
            p.add_term(e.clone(), c);
        }
        p
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let mut p = Poly::zero(&self.field, self.nvars);
        for (e, &v) in &self.terms {
            p.add_term(e.clone(), self.field.mul(c, v));
        }
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let q = self.field.order();
        let mut p = Poly::zero(&self.field, self.nvars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e = e1
                    .iter()
                    .zip(e2)
                    .map(|(&a, &b)| if a + b >= q { a + b - (q - 1) } else { a + b })
                    .collect();
                p.add_term(e, self.field.mul(c1, c2));
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(&self.field, self.nvars, 1), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let m = e
                .iter()
                .zip(x)
                .fold(c, |m, (&k, &v)| f.mul(m, f.pow(v, k as u64)));
            f.add(acc, m)
        })
    }

    /// Text form: one term per line, coefficient followed by exponents.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars={}\n", self.nvars);
        for (e, c) in &self.terms {
            let exps: Vec<String> = e.iter().map(u32::to_string).collect();
            out.push_str(&format!("{c} {}\n", exps.join(" ")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::all_points;

    #[test]
    fn reduction_agrees_with_evaluation() {
        for q in [2u64, 3, 4, 5] {
            let f = Field::of_order(q).unwrap();
            let x = Poly::var(&f, 2, 0);
            let y = Poly::var(&f, 2, 1);
            let p = x.add(&y).pow(q as u32 + 2).sub(&x.mul(&y));
            assert!(p.terms().all(|(e, _)| e.iter().all(|&k| k < f.order())));
            for pt in all_points(f.order(), 2) {
                let (a, b) = (pt.coords()[0], pt.coords()[1]);
                let s = f.add(a, b);
                let want = f.sub(f.pow(s, q + 2), f.mul(a, b));
                assert_eq!(p.eval(pt.coords()), want);
            }
        }
    }

    #[test]
    fn cancellation_gives_zero() {
        let f = Field::of_order(3).unwrap();
        let x = Poly::var(&f, 1, 0);
        assert!(x.pow(3).sub(&x).is_zero());
        assert_eq!(x.pow(2).degree(), 2);
    }
}
