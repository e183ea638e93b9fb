//! Convolutional codes given by canonical polynomial generator matrices.

use crate::error::{Error, Result};
use crate::gf::FieldEmbedding;
use crate::gf::FiniteField;
use crate::polymat::{poly_gcd, FqPoly, PolyMatrix};

fn check_full_rank(g: &PolyMatrix) -> Result<()> {
    if g.rows() > g.cols() {
        return Err(Error::Shape(format!("{}x{} has more rows than columns", g.rows(), g.cols())));
    }
    let rank = g.rank_over_fz();
    if rank < g.rows() {
        return Err(Error::RankDeficient { rank, expected: g.rows() });
    }
    Ok(())
}

/// True iff the maximal minors are coprime.
pub fn is_basic(g: &PolyMatrix) -> Result<bool> {
    check_full_rank(g)?;
    let mut acc = FqPoly::zero(g.field());
    for m in g.maximal_minors()? {
        if m.is_zero() {
            continue;
        }
        acc = poly_gcd(&acc, &m)?;
        if acc.degree() == Some(0) {
            return Ok(true);
        }
    }
    Ok(acc.degree() == Some(0))
}

/// True iff the leading-row-coefficient matrix has full rank.
pub fn is_reduced(g: &PolyMatrix) -> Result<bool> {
    check_full_rank(g)?;
    Ok(g.leading_row_coefficients().rank() == g.rows())
}

/// Reduces a basic matrix by row operations until its leading-row-coefficient
/// matrix has full rank; rows come out sorted by degree.
pub fn to_canonical(g: &PolyMatrix) -> Result<PolyMatrix> {
    if !is_basic(g)? {
        return Err(Error::NotBasic);
    }
    let f = g.field().clone();
    let mut rows = g.to_rows();
    loop {
        let cur = PolyMatrix::from_rows(&f, rows.clone())?;
        let lead = cur.leading_row_coefficients();
        let Some(v) = lead.left_kernel().into_iter().next() else {
            break;
        };
        let degs: Vec<usize> = (0..rows.len()).map(|r| cur.row_degree(r).expect("full rank")).collect();
        let target = (0..rows.len())
            .filter(|&i| !v[i].is_zero())
            .max_by_key(|&i| degs[i])
            .expect("kernel vector is nonzero");
        let vt_inv = f.inv(v[target]).expect("nonzero");
        let mut new_row = rows[target].clone();
        for i in 0..rows.len() {
            if i == target || v[i].is_zero() {
                continue;
            }
            let c = f.mul(v[i], vt_inv);
            let shift = degs[target] - degs[i];
            for (e, src) in new_row.iter_mut().zip(&rows[i]) {
                *e = e.add(&src.scale(c).shift(shift));
            }
        }
        rows[target] = new_row;
    }
    let m = PolyMatrix::from_rows(&f, rows)?;
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by_key(|&r| m.row_degree(r));
    PolyMatrix::from_rows(&f, order.iter().map(|&r| m.row(r).to_vec()).collect())
}

/// A convolutional code with a canonical generator matrix and cached invariants.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvCode {
    gen: PolyMatrix,
    n: usize,
    k: usize,
    delta: usize,
    memory: usize,
    forney: Vec<usize>,
    column_degrees: Vec<Option<usize>>,
}

/// Numeric parameters of the classifying space: `kappa = k(m+1) - delta`,
/// `mu_g = sum of (column degree + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ClassificationParams {
    pub kappa: usize,
    pub mu_g: usize,
}

impl ConvCode {
    /// Validates and canonicalizes `g`.
    pub fn new(g: &PolyMatrix) -> Result<Self> {
        let gen = to_canonical(g)?;
        let forney: Vec<usize> = (0..gen.rows()).map(|r| gen.row_degree(r).expect("full rank")).collect();
        let delta = forney.iter().sum();
        let max_minor = gen.maximal_minors()?.iter().filter_map(FqPoly::degree).max().unwrap_or(0);
        assert_eq!(delta, max_minor, "degree must equal the highest maximal-minor degree");
        Ok(ConvCode {
            n: gen.cols(),
            k: gen.rows(),
            delta,
            memory: forney.iter().copied().max().unwrap_or(0),
            column_degrees: (0..gen.cols()).map(|c| gen.column_degree(c)).collect(),
            forney,
            gen,
        })
    }

    pub fn generator(&self) -> &PolyMatrix {
        &self.gen
    }

    pub fn field(&self) -> &FiniteField {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Row degrees of the canonical matrix, ascending.
    pub fn forney(&self) -> &[usize] {
        &self.forney
    }

    /// Per-column degrees of the stored matrix (`None` for a zero column).
    pub fn column_degrees(&self) -> &[Option<usize>] {
        &self.column_degrees
    }

    /// `(n-k)(floor(delta/k)+1) + delta + 1`
    pub fn singleton_bound(&self) -> usize {
        (self.n - self.k) * (self.delta / self.k + 1) + self.delta + 1
    }

    pub fn classification_params(&self) -> ClassificationParams {
        ClassificationParams {
            kappa: self.k * (self.memory + 1) - self.delta,
            mu_g: self.column_degrees.iter().map(|d| d.map_or(0, |d| d + 1)).sum(),
        }
    }

    /// The same code with its alphabet enlarged along `e`.
    pub fn lift(&self, e: &FieldEmbedding) -> Result<ConvCode> {
        if e.source() != self.field() {
            return Err(Error::FieldMismatch);
        }
        ConvCode::new(&self.gen.embed(e))
    }
}

pub fn new_code(g: &PolyMatrix) -> Result<ConvCode> {
    ConvCode::new(g)
}

pub fn singleton_bound(c: &ConvCode) -> usize {
    c.singleton_bound()
}

pub fn classification_params(c: &ConvCode) -> ClassificationParams {
    c.classification_params()
}

pub fn lift_code(c: &ConvCode, e: &FieldEmbedding) -> Result<ConvCode> {
    c.lift(e)
}
