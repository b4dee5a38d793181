//! Text formats for matrices, tuples, point sets and polynomials.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::MatrixGF;
use crate::point::Point;
use crate::poly::Poly;
use crate::search::PointSet;
use crate::systems::SolutionTuple;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_int<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::Parse(format!("line {line}: cannot parse '{tok}'")))
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("missing '{key}=' header")))?;
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("line {no}: expected '{key}=...', got '{line}'")))?;
    Ok((no, rest.trim()))
}

/// A field spec: `<q>`, `<p>^<e>`, optionally followed by `poly=<c0,…,1>`.
pub fn parse_field(spec: &str) -> Result<Field> {
    let mut parts = spec.split_whitespace();
    let order = parts
        .next()
        .ok_or_else(|| Error::Parse("empty field spec".into()))?;
    let modulus = match parts.next() {
        None => None,
        Some(p) => {
            let coeffs = p
                .strip_prefix("poly=")
                .ok_or_else(|| Error::Parse(format!("expected 'poly=...', got '{p}'")))?;
            Some(
                coeffs
                    .split(',')
                    .map(|c| parse_int::<u32>(c.trim(), 1))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    if let Some(extra) = parts.next() {
        return Err(Error::Parse(format!("unexpected '{extra}' in field spec")));
    }
    match order.split_once('^') {
        Some((p, e)) => Field::new(parse_int(p, 1)?, parse_int(e, 1)?, modulus.as_deref()),
        None => {
            let q: u64 = parse_int(order, 1)?;
            match modulus {
                None => Field::of_order(q),
                Some(m) => {
                    let (p, e) = crate::field::prime_power(q).ok_or(Error::UnsupportedOrder(q))?;
                    Field::new(p, e, Some(&m))
                }
            }
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixGF> {
    let mut lines = content_lines(text);
    let (_, spec) = header(&mut lines, "q")?;
    let field = parse_field(spec)?;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (no, line) in lines {
        let row = line
            .split_whitespace()
            .map(|t| parse_int(t, no))
            .collect::<Result<Vec<i64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse(format!(
                    "line {no}: row has {} entries, expected {}",
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    MatrixGF::from_i64_rows(&field, &rows)
}

pub fn parse_tuple(text: &str, field: &Field) -> Result<SolutionTuple> {
    let mut lines = content_lines(text);
    let (no, n) = header(&mut lines, "n")?;
    let n: usize = parse_int(n, no)?;
    let mut points = Vec::new();
    for (no, line) in lines {
        let coords = line
            .split_whitespace()
            .map(|t| field.from_i64(parse_int(t, no)?))
            .collect::<Result<Vec<Elem>>>()?;
        if coords.len() != n {
            return Err(Error::Parse(format!(
                "line {no}: point has {} coordinates, expected {n}",
                coords.len()
            )));
        }
        points.push(Point::new(coords));
    }
    SolutionTuple::new(field, n, points)
}

pub fn tuple_to_text(x: &SolutionTuple) -> String {
    let mut out = format!("n={}\n", x.n());
    for p in x.points() {
        let coords: Vec<String> = p.coords().iter().map(u32::to_string).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_point_set(text: &str, field: &Field) -> Result<PointSet> {
    let mut lines = content_lines(text);
    let (no, n) = header(&mut lines, "n")?;
    let n: usize = parse_int(n, no)?;
    let codes = lines
        .flat_map(|(no, line)| line.split_whitespace().map(move |t| parse_int::<u64>(t, no)))
        .collect::<Result<Vec<_>>>()?;
    PointSet::from_codes(field, n, codes)
}

pub fn point_set_to_text(s: &PointSet) -> String {
    let mut out = format!("n={}\n", s.n());
    for c in s.elements() {
        out.push_str(&format!("{c}\n"));
    }
    out
}

/// `vars=<count>` header, then one term per line: coefficient and exponents.
pub fn parse_poly(text: &str, field: &Field) -> Result<Poly> {
    let mut lines = content_lines(text);
    let (no, vars) = header(&mut lines, "vars")?;
    let nvars: usize = parse_int(vars, no)?;
    let mut terms = Vec::new();
    for (no, line) in lines {
        let mut toks = line.split_whitespace();
        let c = field.from_i64(parse_int(toks.next().unwrap_or_default(), no)?)?;
        let exps = toks.map(|t| parse_int(t, no)).collect::<Result<Vec<u32>>>()?;
        terms.push((c, exps));
    }
    Poly::from_terms(field, nvars, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_roundtrip() {
        let a = parse_matrix("q=5\n# four-term progressions\n1 -2 1 0\n0 1 -2 1\n").unwrap();
        assert_eq!(a.row(0), &[1, 3, 1, 0]);
        assert_eq!(parse_matrix(&a.to_text()).unwrap(), a);
        let b = parse_matrix("q=2^2 poly=1,1,1\n1 2 3\n").unwrap();
        assert_eq!(b.field().order(), 4);
        assert_eq!(parse_matrix(&b.to_text()).unwrap(), b);
        assert_eq!(parse_matrix("q=4\n1 1 0\n").unwrap().field().order(), 4);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_matrix("1 1 1\n").is_err());
        assert!(parse_matrix("q=6\n1 1\n").is_err());
        assert!(parse_matrix("q=3\n1 1\n1\n").is_err());
        assert!(parse_matrix("q=3\n").is_err());
        assert!(parse_matrix("q=3\n1 x\n").is_err());
        assert!(parse_matrix("q=3\n1 3\n").is_err());
    }

    #[test]
    fn tuples_sets_polys() {
        let f = Field::of_order(3).unwrap();
        let x = parse_tuple("n=2\n0 0\n1 2\n-1 1\n", &f).unwrap();
        assert_eq!(x.point(2).coords(), &[2, 1]);
        assert_eq!(parse_tuple(&tuple_to_text(&x), &f).unwrap(), x);
        assert!(parse_tuple("n=2\n0\n", &f).is_err());
        let s = parse_point_set("n=2\n0\n4 8\n", &f).unwrap();
        assert_eq!(s.elements(), &[0, 4, 8]);
        assert_eq!(parse_point_set(&point_set_to_text(&s), &f).unwrap(), s);
        let p = parse_poly("vars=2\n1 0 0\n2 1 1\n", &f).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(parse_poly("vars=2\n1 3 0\n", &f).is_err());
    }
}
