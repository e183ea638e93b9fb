//! Text syntax for polynomials and code files.
//!
//! Polynomials are written low degree first as monomials `c*z^d` joined by
//! `+`, e.g. `a^5 + a^2*z + z^2`. A code file looks like
//!
//! ```text
//! field: gf(8)
//! shape: 1 x 3
//! row: a^5 + z + z^2, a^5 + a*z + a^2*z^2, a^5 + a^2*z + a^4*z^2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::gf::{parse_field_spec, FiniteField, Gf};
use crate::polymat::{FqPoly, PolyMatrix};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, msg: msg.into() }
}

pub fn format_poly(p: &FqPoly) -> String {
    let f = p.field();
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, &c)| {
            let mono = match d {
                0 => return f.format(c),
                1 => "z".to_string(),
                _ => format!("z^{d}"),
            };
            if c == Gf::ONE {
                mono
            } else {
                format!("{}*{mono}", f.format(c))
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn parse_poly(field: &FiniteField, s: &str) -> Result<FqPoly> {
    let mut coeffs: Vec<Gf> = Vec::new();
    if s.trim().is_empty() {
        return Err(parse_err("empty polynomial"));
    }
    for term in s.split('+') {
        let term = term.trim();
        let (c, d) = parse_term(field, term)?;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Gf::ZERO);
        }
        coeffs[d] = field.add(coeffs[d], c);
    }
    Ok(FqPoly::new(field, coeffs))
}

fn parse_term(field: &FiniteField, term: &str) -> Result<(Gf, usize)> {
    let (coef, mono) = match term.rsplit_once('*') {
        Some((c, m)) => (Some(c.trim()), Some(m.trim())),
        None if term.starts_with('z') => (None, Some(term)),
        None => (Some(term), None),
    };
    let c = match coef {
        Some(c) => field.parse(c)?,
        None => Gf::ONE,
    };
    let d = match mono {
        None => 0,
        Some("z") => 1,
        Some(m) => m
            .strip_prefix("z^")
            .and_then(|e| e.trim().parse::<usize>().ok())
            .ok_or_else(|| parse_err(format!("bad monomial `{m}`")))?,
    };
    Ok((c, d))
}

/// Writes a generator matrix in code-file form.
pub fn format_code_file(g: &PolyMatrix) -> String {
    let mut out = format!("field: {}\nshape: {} x {}\n", g.field().spec_string(), g.rows(), g.cols());
    for r in 0..g.rows() {
        let entries: Vec<String> = g.row(r).iter().map(format_poly).collect();
        out.push_str(&format!("row: {}\n", entries.join(", ")));
    }
    out
}

/// Content lines of a text file with 1-based line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Splits `key: value`, checking the key.
pub fn expect_key<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    match line.split_once(':') {
        Some((k, v)) if k.trim() == key => Ok(v.trim()),
        _ => Err(parse_err(format!("expected `{key}: ...`"))),
    }
}

/// Reads a code file into its generator matrix (not yet validated).
pub fn parse_code_file(text: &str) -> Result<PolyMatrix> {
    let mut lines = content_lines(text);
    let (ln, l) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing field line".into() })?;
    let field = expect_key(l, "field").and_then(parse_field_spec).map_err(|e| e.at_line(ln))?;
    let (ln, l) = lines.next().ok_or(Error::Parse { line: ln + 1, msg: "missing shape line".into() })?;
    let (k, n) = expect_key(l, "shape")
        .and_then(|v| {
            let (k, n) = v.split_once('x').ok_or_else(|| parse_err("shape must be `k x n`"))?;
            let k = k.trim().parse::<usize>().map_err(|_| parse_err("bad row count"))?;
            let n = n.trim().parse::<usize>().map_err(|_| parse_err("bad column count"))?;
            Ok((k, n))
        })
        .map_err(|e| e.at_line(ln))?;
    if k == 0 || n == 0 {
        return Err(Error::Parse { line: ln, msg: "empty shape".into() });
    }
    let mut rows = Vec::with_capacity(k);
    let mut last = ln;
    for (ln, l) in lines {
        last = ln;
        if rows.len() == k {
            return Err(Error::Parse { line: ln, msg: format!("more than {k} rows") });
        }
        let row = expect_key(l, "row")
            .and_then(|v| v.split(',').map(|p| parse_poly(&field, p)).collect::<Result<Vec<_>>>())
            .map_err(|e| e.at_line(ln))?;
        if row.len() != n {
            return Err(Error::Parse { line: ln, msg: format!("row has {} entries, expected {n}", row.len()) });
        }
        rows.push(row);
    }
    if rows.len() != k {
        return Err(Error::Parse { line: last, msg: format!("expected {k} rows, found {}", rows.len()) });
    }
    PolyMatrix::from_rows(&field, rows)
}
