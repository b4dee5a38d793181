//! Finite fields `F_q`, `q = p^e`.
//!
//! Elements are canonical integers in `[0, q)`: the base-`p` digits of an element
//! are the coefficients (lowest degree first) of its representative polynomial
//! modulo the field's irreducible modulus. For `e = 1` this is ordinary arithmetic
//! mod `p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of some [`Field`], as its canonical integer.
pub type Elem = u32;

/// Largest order accepted without an explicit modulus.
pub const MAX_DEFAULT_ORDER: u64 = 1 << 16;
/// Orders up to this size get full operation tables.
const TABLE_ORDER: u32 = 16;
const MAX_ORDER: u64 = 1 << 31;

#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, lowest coefficient first; `None` for prime fields.
    modulus: Option<Vec<u32>>,
    tables: Option<Tables>,
}

struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.modulus {
            None => write!(f, "F_{}", self.inner.q),
            Some(m) => write!(f, "F_{}^{} mod {:?}", self.inner.p, self.inner.e, m),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds `F_{p^e}`. When `e > 1` and no modulus is given, the lexicographically
    /// smallest monic irreducible polynomial of degree `e` over `F_p` is used.
    pub fn new(p: u64, e: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if e == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if q >= MAX_ORDER as u128 {
            return Err(Error::UnsupportedOrder(q.min(u64::MAX as u128) as u64));
        }
        let q = q as u64;
        if q > MAX_DEFAULT_ORDER && modulus.is_none() {
            return Err(Error::UnsupportedOrder(q));
        }
        let p32 = p as u32;
        let modulus = if e == 1 {
            if let Some(m) = modulus {
                validate_modulus(p32, 1, m)?;
            }
            None
        } else {
            match modulus {
                Some(m) => {
                    validate_modulus(p32, e, m)?;
                    if !is_irreducible(p32, m) {
                        return Err(Error::ReduciblePolynomial(p));
                    }
                    Some(m.to_vec())
                }
                None => Some(default_modulus(p32, e)),
            }
        };
        let mut inner = FieldInner {
            p: p32,
            e,
            q: q as u32,
            modulus,
            tables: None,
        };
        if inner.q <= TABLE_ORDER {
            inner.tables = Some(Tables::build(&inner));
        }
        Ok(Field {
            inner: Arc::new(inner),
        })
    }

    /// Builds a field from its order, picking the default modulus.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
        Field::new(p, e, None)
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.e
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.inner.modulus.as_deref()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.inner.q
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        1..self.inner.q
    }

    /// Interprets an integer literal. Nonnegative literals must be canonical
    /// (`< q`); negative literals are reduced mod `p` and negated.
    pub fn from_i64(&self, v: i64) -> Result<Elem> {
        if v >= 0 {
            if (v as u64) < self.inner.q as u64 {
                Ok(v as Elem)
            } else {
                Err(Error::Parse(format!("{v} is not an element of {self}")))
            }
        } else {
            let r = (v.unsigned_abs() % self.inner.p as u64) as Elem;
            Ok(self.neg(r))
        }
    }

    /// The image of an integer under `Z -> F_p ⊆ F_q`.
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.inner.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if let Some(t) = &f.tables {
            return t.add[(a * f.q + b) as usize];
        }
        if f.e == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else {
            f.digit_add(a, b, false)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let f = &*self.inner;
        if let Some(t) = &f.tables {
            return t.neg[a as usize];
        }
        if f.e == 1 {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        } else {
            f.digit_add(0, a, true)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if f.tables.is_none() && f.e > 1 {
            return f.digit_add(a, b, true);
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if let Some(t) = &f.tables {
            return t.mul[(a * f.q + b) as usize];
        }
        if f.e == 1 {
            ((a as u64 * b as u64) % f.p as u64) as Elem
        } else {
            f.poly_mul(a, b)
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn try_inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.inner.tables {
            return Some(t.inv[a as usize]);
        }
        Some(self.pow(a, self.inner.q as u64 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Sum of the entries of a slice.
    pub fn sum(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(0, |acc, &x| self.add(acc, x))
    }

    /// `y += c * x`, entrywise.
    #[inline]
    pub fn axpy(&self, y: &mut [Elem], c: Elem, x: &[Elem]) {
        if c == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.add(*yi, self.mul(c, xi));
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

impl Tables {
    fn build(f: &FieldInner) -> Tables {
        let q = f.q;
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        let mut neg = vec![0; q as usize];
        let mut inv = vec![0; q as usize];
        for a in 0..q {
            for b in 0..q {
                let (s, m) = if f.e == 1 {
                    ((a + b) % f.p, (a * b) % f.p)
                } else {
                    (f.digit_add(a, b, false), f.poly_mul(a, b))
                };
                add[(a * q + b) as usize] = s;
                mul[(a * q + b) as usize] = m;
                if s == 0 {
                    neg[a as usize] = b;
                }
                if m == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }
}

impl FieldInner {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn digit_add(&self, mut a: u32, mut b: u32, subtract: bool) -> u32 {
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let (x, y) = (a % p, b % p);
            let c = if subtract { (x + p - y) % p } else { (x + y) % p };
            out += c * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let e = self.e as usize;
        let m = self.modulus.as_ref().expect("extension field has a modulus");
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce using the monic modulus, highest degree first
        for deg in (e..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &mi) in m[..e].iter().enumerate() {
                let t = deg - e + i;
                prod[t] = (prod[t] + (p - c) * mi as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.undigits(&low)
    }
}

/// Returns `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn validate_modulus(p: u32, e: u32, m: &[u32]) -> Result<()> {
    if m.len() != e as usize + 1 {
        return Err(Error::InvalidModulus(format!(
            "expected {} coefficients for degree {e}, got {}",
            e + 1,
            m.len()
        )));
    }
    if m[e as usize] != 1 {
        return Err(Error::InvalidModulus("modulus must be monic".into()));
    }
    if m.iter().any(|&c| c >= p) {
        return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
    }
    Ok(())
}

/// Remainder of `a` modulo the monic polynomial `b` over `F_p` (lowest coefficient first).
fn poly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * bi as u64 % p) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive check: no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(p: u32, m: &[u32]) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut rest = low;
            for _ in 0..d {
                f.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            f.push(1);
            if poly_rem(p, m, &f).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree `e`
/// over `F_p`, ordering candidates by the base-`p` integer of their lower coefficients.
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for low in 0..count {
        let mut m = Vec::with_capacity(e as usize + 1);
        let mut rest = low;
        for _ in 0..e {
            m.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        m.push(1);
        if is_irreducible(p, &m) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
