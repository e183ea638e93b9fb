//! Polynomials in `z` over a finite field, and scalar/polynomial matrices.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldEmbedding, FiniteField, Gf};

/// A polynomial in `z`, stored low-order first with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct FqPoly {
    field: FiniteField,
    coeffs: Vec<Gf>,
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_poly(self))
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_poly(self))
    }
}

impl FqPoly {
    pub fn new(field: &FiniteField, mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FiniteField) -> Self {
        FqPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &FiniteField, c: Gf) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::constant(field, Gf::ONE)
    }

    /// `c z^d`
    pub fn monomial(field: &FiniteField, c: Gf, d: usize) -> Self {
        let mut v = vec![Gf::ZERO; d + 1];
        v[d] = c;
        Self::new(field, v)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    /// Coefficient of `z^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Gf {
        self.coeffs.get(i).copied().unwrap_or(Gf::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<Gf> {
        self.coeffs.last().copied()
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn add(&self, other: &FqPoly) -> FqPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        FqPoly::new(f, v)
    }

    pub fn sub(&self, other: &FqPoly) -> FqPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        FqPoly::new(f, v)
    }

    pub fn neg(&self) -> FqPoly {
        let f = &self.field;
        FqPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn mul(&self, other: &FqPoly) -> FqPoly {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut v = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        FqPoly::new(f, v)
    }

    pub fn scale(&self, c: Gf) -> FqPoly {
        let f = &self.field;
        FqPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: usize) -> FqPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Gf::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        FqPoly { field: self.field.clone(), coeffs: v }
    }

    /// Euclidean division; `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &FqPoly) -> Option<(FqPoly, FqPoly)> {
        let f = &self.field;
        let dd = divisor.degree()?;
        let lead_inv = f.inv(divisor.leading()?)?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Gf::ZERO; rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = f.mul(rem[top], lead_inv);
            let shift = top - dd;
            quot[shift] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                rem[i + shift] = f.sub(rem[i + shift], f.mul(c, b));
            }
            debug_assert!(rem[top].is_zero());
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Some((FqPoly::new(f, quot), FqPoly::new(f, rem)))
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> FqPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(self.field.inv(l).expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, x: Gf) -> Gf {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Gf::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Image under a field embedding.
    pub fn embed(&self, e: &FieldEmbedding) -> FqPoly {
        FqPoly::new(e.target(), self.coeffs.iter().map(|&c| e.apply(c)).collect())
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &FqPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).is_some_and(|(_, r)| r.is_zero())
    }
}

/// Monic greatest common divisor by Euclid's algorithm.
pub fn poly_gcd(a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    Ok(x.monic())
}

/// Total number of nonzero coefficients across a polynomial vector.
pub fn weight(v: &[FqPoly]) -> usize {
    v.iter().map(FqPoly::weight).sum()
}

/// Dense matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ScalarMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&x| self.field.format(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ScalarMatrix {
    pub fn zeros(field: &FiniteField, rows: usize, cols: usize) -> Self {
        ScalarMatrix { field: field.clone(), rows, cols, data: vec![Gf::ZERO; rows * cols] }
    }

    pub fn from_rows(field: &FiniteField, rows: &[Vec<Gf>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(ScalarMatrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Gf::ONE);
        }
        m
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Gf {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Gf) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Gf] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Gf>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Rows of `blocks` stacked top to bottom.
    pub fn vstack(blocks: &[&ScalarMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::Shape("empty stack".into()))?;
        if blocks.iter().any(|b| b.cols != first.cols) {
            return Err(Error::Shape("column counts differ".into()));
        }
        let mut data = Vec::new();
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        Ok(ScalarMatrix { field: first.field.clone(), rows, cols: first.cols, data })
    }

    /// Blocks juxtaposed left to right.
    pub fn hstack(blocks: &[&ScalarMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::Shape("empty stack".into()))?;
        if blocks.iter().any(|b| b.rows != first.rows) {
            return Err(Error::Shape("row counts differ".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(&first.field, first.rows, cols);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r, off + c, b.get(r, c));
                }
            }
            off += b.cols;
        }
        Ok(out)
    }

    pub fn select_cols(&self, cols: &[usize]) -> ScalarMatrix {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// `v * self` for a row vector `v`.
    pub fn left_mul(&self, v: &[Gf]) -> Vec<Gf> {
        let f = &self.field;
        let mut out = vec![Gf::ZERO; self.cols];
        for (r, &x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(x, a));
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ScalarMatrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the row space, in reduced echelon form.
    pub fn row_space_basis(&self) -> ScalarMatrix {
        let (m, pivots) = self.rref();
        let rows: Vec<Vec<Gf>> = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        if rows.is_empty() {
            return Self::zeros(&self.field, 0, self.cols);
        }
        Self::from_rows(&self.field, &rows).expect("rectangular")
    }

    /// Basis of `{ v : v * self = 0 }`.
    pub fn left_kernel(&self) -> Vec<Vec<Gf>> {
        let f = &self.field;
        let t = self.transpose();
        let (m, pivots) = t.rref();
        let free: Vec<usize> = (0..t.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Gf::ZERO; t.cols];
                v[fc] = Gf::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Determinant of a square matrix by Gaussian elimination.
    pub fn det(&self) -> Result<Gf> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let f = &self.field;
        let mut m = self.clone();
        let mut det = Gf::ONE;
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Gf::ZERO);
            };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("nonzero pivot");
            for i in c + 1..m.rows {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn embed(&self, e: &FieldEmbedding) -> ScalarMatrix {
        ScalarMatrix {
            field: e.target().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| e.apply(x)).collect(),
        }
    }
}

/// A `k x n` matrix of polynomials over one field.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    entries: Vec<FqPoly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|p| p.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl PolyMatrix {
    pub fn from_rows(field: &FiniteField, rows: Vec<Vec<FqPoly>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        if rows.iter().flatten().any(|p| p.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(PolyMatrix { field: field.clone(), rows: rows.len(), cols, entries: rows.concat() })
    }

    /// Constant matrix.
    pub fn from_scalar(s: &ScalarMatrix) -> Self {
        let entries = s.data.iter().map(|&c| FqPoly::constant(&s.field, c)).collect();
        PolyMatrix { field: s.field.clone(), rows: s.rows, cols: s.cols, entries }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &FqPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[FqPoly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FqPoly>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Highest degree in row `r`; `None` for a zero row.
    pub fn row_degree(&self, r: usize) -> Option<usize> {
        self.row(r).iter().filter_map(FqPoly::degree).max()
    }

    pub fn column_degree(&self, c: usize) -> Option<usize> {
        (0..self.rows).filter_map(|r| self.entry(r, c).degree()).max()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(FqPoly::degree).max()
    }

    /// Row `r` holds the coefficients of `z^{deg row r}`.
    pub fn leading_row_coefficients(&self) -> ScalarMatrix {
        let mut m = ScalarMatrix::zeros(&self.field, self.rows, self.cols);
        for r in 0..self.rows {
            if let Some(d) = self.row_degree(r) {
                for c in 0..self.cols {
                    m.set(r, c, self.entry(r, c).coeff(d));
                }
            }
        }
        m
    }

    /// Coefficient matrices `G_0, ..., G_d` with `d` the largest entry degree.
    pub fn decompose(&self) -> Vec<ScalarMatrix> {
        let d = self.max_degree().unwrap_or(0);
        (0..=d)
            .map(|i| {
                let mut m = ScalarMatrix::zeros(&self.field, self.rows, self.cols);
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        m.set(r, c, self.entry(r, c).coeff(i));
                    }
                }
                m
            })
            .collect()
    }

    pub fn eval_at(&self, z0: Gf) -> ScalarMatrix {
        let mut m = ScalarMatrix::zeros(&self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.entry(r, c).eval(z0));
            }
        }
        m
    }

    /// All `k x k` minors, column subsets in lexicographic order.
    pub fn maximal_minors(&self) -> Result<Vec<FqPoly>> {
        let k = self.rows;
        if k > self.cols {
            return Err(Error::Shape(format!("{}x{} has more rows than columns", k, self.cols)));
        }
        Ok(combinations(self.cols, k)
            .into_iter()
            .map(|cols| {
                let sub: Vec<FqPoly> = (0..k)
                    .flat_map(|r| cols.iter().map(move |&c| (r, c)))
                    .map(|(r, c)| self.entry(r, c).clone())
                    .collect();
                poly_det(&sub, k)
            })
            .collect())
    }

    /// Rank over the rational function field F(z).
    pub fn rank_over_fz(&self) -> usize {
        let mut m: Vec<Vec<FqPoly>> = self.to_rows();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, rank);
            let pivot_row = m[rank].clone();
            for row in m.iter_mut().skip(rank + 1) {
                let factor = row[c].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    row[j] = row[j].mul(&pivot_row[c]).sub(&pivot_row[j].mul(&factor));
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn embed(&self, e: &FieldEmbedding) -> PolyMatrix {
        PolyMatrix {
            field: e.target().clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.embed(e)).collect(),
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Determinant of a `k x k` polynomial matrix given row-major.
/// Fraction-free elimination up to 6x6, cofactor expansion beyond.
pub fn poly_det(entries: &[FqPoly], k: usize) -> FqPoly {
    if k <= 6 {
        det_bareiss(entries, k)
    } else {
        det_cofactor(entries, k)
    }
}

pub fn det_bareiss(entries: &[FqPoly], k: usize) -> FqPoly {
    assert_eq!(entries.len(), k * k);
    let field = entries[0].field().clone();
    let mut m: Vec<Vec<FqPoly>> = entries.chunks(k).map(<[FqPoly]>::to_vec).collect();
    let mut negate = false;
    let mut prev = FqPoly::one(&field);
    for i in 0..k {
        if m[i][i].is_zero() {
            let Some(p) = (i + 1..k).find(|&r| !m[r][i].is_zero()) else {
                return FqPoly::zero(&field);
            };
            m.swap(i, p);
            negate = !negate;
        }
        for j in i + 1..k {
            for l in i + 1..k {
                let num = m[j][l].mul(&m[i][i]).sub(&m[j][i].mul(&m[i][l]));
                let (q, r) = num.div_rem(&prev).expect("previous pivot is nonzero");
                debug_assert!(r.is_zero(), "fraction-free step divides exactly");
                m[j][l] = q;
            }
        }
        prev = m[i][i].clone();
    }
    let d = m[k - 1][k - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

pub fn det_cofactor(entries: &[FqPoly], k: usize) -> FqPoly {
    assert_eq!(entries.len(), k * k);
    let field = entries[0].field().clone();
    if k == 1 {
        return entries[0].clone();
    }
    let mut acc = FqPoly::zero(&field);
    for c in 0..k {
        let a = &entries[c];
        if a.is_zero() {
            continue;
        }
        let minor: Vec<FqPoly> = (1..k)
            .flat_map(|r| (0..k).filter(move |&j| j != c).map(move |j| (r, j)))
            .map(|(r, j)| entries[r * k + j].clone())
            .collect();
        let term = a.mul(&det_cofactor(&minor, k - 1));
        acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}
