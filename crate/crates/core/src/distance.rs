//! Row distances, the stacked code C⁰, the stage bound l(C) and free distance.
//!
//! All distances come from [`min_weight`], a depth-first enumeration of
//! messages row by row. The first nonzero message symbol is fixed to 1
//! (weights are invariant under scaling), a column's value is final once the
//! last row touching it has been assigned, and a branch is abandoned as soon
//! as the frozen columns alone reach the best weight found so far. When the
//! remaining budget is smaller than the number of columns frozen by the next
//! row, only symbols that zero enough of those columns are tried.

use crate::code::ConvCode;
use crate::error::{Error, Result};
use crate::gf::{FiniteField, Gf};
use crate::polymat::{combinations, ScalarMatrix};

pub const DEFAULT_CAP: u64 = 100_000_000;
pub const DEFAULT_FALLBACK_STAGE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceConfig {
    /// Maximum number of search nodes per enumeration.
    pub cap: u64,
    /// Last stage examined when the stage bound is not available.
    pub fallback_max_stage: usize,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig { cap: DEFAULT_CAP, fallback_max_stage: DEFAULT_FALLBACK_STAGE }
    }
}

/// Which messages take part in a search.
#[derive(Clone, Copy)]
pub enum Restriction<'a> {
    None,
    /// The first and the last `block_rows` message symbols are not all zero.
    EndBlocksNonzero { block_rows: usize },
    /// Arbitrary test on the full message. Must be invariant under scaling
    /// by nonzero constants.
    Predicate(&'a (dyn Fn(&[Gf]) -> bool + Sync)),
}

/// A minimum-weight search result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub weight: usize,
    pub message: Vec<Gf>,
}

struct Dfs<'a> {
    f: &'a FiniteField,
    rows: Vec<Vec<(usize, Gf)>>,
    frozen: Vec<Vec<(usize, Gf)>>,
    elements: Vec<Gf>,
    restrict: Restriction<'a>,
    acc: Vec<Gf>,
    msg: Vec<Gf>,
    best: usize,
    witness: Option<Vec<Gf>>,
    nodes: u64,
    cap: u64,
}

impl Dfs<'_> {
    fn apply(&mut self, i: usize, x: Gf) {
        if x.is_zero() {
            return;
        }
        for &(j, s) in &self.rows[i] {
            self.acc[j] = self.f.add(self.acc[j], self.f.mul(x, s));
        }
    }

    fn undo(&mut self, i: usize, x: Gf) {
        if x.is_zero() {
            return;
        }
        for &(j, s) in &self.rows[i] {
            self.acc[j] = self.f.sub(self.acc[j], self.f.mul(x, s));
        }
    }

    fn frozen_weight(&self, i: usize, x: Gf) -> usize {
        self.frozen[i]
            .iter()
            .filter(|&&(j, s)| !self.f.add(self.acc[j], self.f.mul(x, s)).is_zero())
            .count()
    }

    fn admissible_leaf(&self) -> bool {
        match self.restrict {
            Restriction::None => true,
            Restriction::EndBlocksNonzero { .. } => true,
            Restriction::Predicate(p) => p(&self.msg),
        }
    }

    /// Whether assigning `x` at row `i` keeps the end-block condition satisfiable.
    fn end_blocks_ok(&self, i: usize, x: Gf, started: bool) -> bool {
        let Restriction::EndBlocksNonzero { block_rows } = self.restrict else {
            return true;
        };
        let r = self.rows.len();
        if i + 1 == block_rows && !started && x.is_zero() {
            return false;
        }
        if i + 1 == r && x.is_zero() {
            let lo = r.saturating_sub(block_rows);
            return self.msg[lo..i].iter().any(|m| !m.is_zero());
        }
        true
    }

    fn candidates(&self, i: usize, weight: usize, started: bool) -> Vec<Gf> {
        let base: Vec<Gf> = if started { self.elements.clone() } else { vec![Gf::ZERO, Gf::ONE] };
        let budget = self.best - 1 - weight;
        let nfrozen = self.frozen[i].len();
        if nfrozen <= budget {
            return base;
        }
        // at least `need` frozen columns must vanish
        let need = nfrozen - budget;
        let mut roots: Vec<Gf> = self.frozen[i]
            .iter()
            .map(|&(j, s)| self.f.neg(self.f.div(self.acc[j], s).expect("nonzero entry")))
            .collect();
        roots.sort_unstable();
        let mut out = Vec::new();
        let mut t = 0;
        while t < roots.len() {
            let mut u = t;
            while u < roots.len() && roots[u] == roots[t] {
                u += 1;
            }
            if u - t >= need && (started || roots[t].index() <= 1) {
                out.push(roots[t]);
            }
            t = u;
        }
        out
    }

    fn run(&mut self, i: usize, weight: usize, started: bool) -> Result<()> {
        if i == self.rows.len() {
            if started && self.admissible_leaf() {
                self.best = weight;
                self.witness = Some(self.msg.clone());
            }
            return Ok(());
        }
        for x in self.candidates(i, weight, started) {
            if weight >= self.best {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::TooLarge(format!("search exceeded {} nodes", self.cap)));
            }
            if !self.end_blocks_ok(i, x, started) {
                continue;
            }
            let w = weight + self.frozen_weight(i, x);
            if w >= self.best {
                continue;
            }
            self.msg[i] = x;
            self.apply(i, x);
            let r = self.run(i + 1, w, started || !x.is_zero());
            self.undo(i, x);
            self.msg[i] = Gf::ZERO;
            r?;
        }
        Ok(())
    }
}

/// Smallest weight of `m * s` over admissible nonzero messages `m`, if below
/// `below`. Messages giving the zero word count with weight zero.
pub fn min_weight(
    s: &ScalarMatrix,
    restrict: Restriction<'_>,
    below: Option<usize>,
    cap: u64,
) -> Result<Option<Witness>> {
    let f = s.field();
    let (nr, nc) = (s.rows(), s.cols());
    if nr == 0 {
        return Ok(None);
    }
    let rows: Vec<Vec<(usize, Gf)>> = (0..nr)
        .map(|r| s.row(r).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, &x)| (j, x)).collect())
        .collect();
    let mut frozen = vec![Vec::new(); nr];
    for j in 0..nc {
        if let Some(last) = (0..nr).rev().find(|&r| !s.get(r, j).is_zero()) {
            frozen[last].push((j, s.get(last, j)));
        }
    }
    let mut dfs = Dfs {
        f,
        rows,
        frozen,
        elements: f.enumerate(),
        restrict,
        acc: vec![Gf::ZERO; nc],
        msg: vec![Gf::ZERO; nr],
        best: below.unwrap_or(nc + 1),
        witness: None,
        nodes: 0,
        cap,
    };
    if dfs.best == 0 {
        return Ok(None);
    }
    dfs.run(0, 0, false)?;
    Ok(dfs.witness.map(|message| Witness { weight: dfs.best, message }))
}

/// Hamming weight of a vector.
pub fn hamming_weight(v: &[Gf]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Minimum distance via the codewords vanishing on `rows - 1` independent
/// columns; each such set spans a one-dimensional subcode and some minimum
/// weight word arises this way.
fn flats_distance(basis: &ScalarMatrix, cap: u64) -> Result<usize> {
    let (k, n) = (basis.rows(), basis.cols());
    let mut best = n;
    let mut nodes = 0u64;
    for t in combinations(n, k - 1) {
        nodes += 1;
        if nodes > cap {
            return Err(Error::TooLarge(format!("search exceeded {cap} nodes")));
        }
        let sub = basis.select_cols(&t);
        let ker = sub.left_kernel();
        if ker.len() != 1 {
            continue;
        }
        best = best.min(hamming_weight(&basis.left_mul(&ker[0])));
    }
    Ok(best)
}

/// Minimum distance of the code spanned by the rows of `s`.
pub fn block_distance(s: &ScalarMatrix, cap: u64) -> Result<usize> {
    let rank = s.rank();
    if rank < s.rows() {
        return Err(Error::RankDeficient { rank, expected: s.rows() });
    }
    let (k, n) = (s.rows(), s.cols());
    let q = s.field().order() as f64;
    if k >= 2 && binomial(n, k - 1) < q.powi(k as i32 - 1) {
        return flats_distance(&s.row_space_basis(), cap);
    }
    Ok(min_weight(s, Restriction::None, None, cap)?.expect("full rank code has a nonzero word").weight)
}

/// Minimum weight among admissible messages, `None` if none is admissible.
pub fn block_distance_restricted(s: &ScalarMatrix, restrict: Restriction<'_>, cap: u64) -> Result<Option<usize>> {
    Ok(min_weight(s, restrict, None, cap)?.map(|w| w.weight))
}

/// Stage-`l` sliding matrix: block `(r, c)` is `G_{c-r}` for `0 <= c-r <= delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlidingMatrix {
    pub l: usize,
    pub body: ScalarMatrix,
}

fn coefficient_blocks(c: &ConvCode) -> Vec<ScalarMatrix> {
    let mut g = c.generator().decompose();
    g.resize(c.delta() + 1, ScalarMatrix::zeros(c.field(), c.k(), c.n()));
    g
}

pub fn sliding_matrix(c: &ConvCode, l: usize) -> SlidingMatrix {
    let (k, n, d) = (c.k(), c.n(), c.delta());
    let g = coefficient_blocks(c);
    let mut body = ScalarMatrix::zeros(c.field(), k * (l + 1), n * (d + l + 1));
    for r in 0..=l {
        for (i, gi) in g.iter().enumerate() {
            for a in 0..k {
                for b in 0..n {
                    body.set(r * k + a, (r + i) * n + b, gi.get(a, b));
                }
            }
        }
    }
    SlidingMatrix { l, body }
}

/// `(G_delta; ...; G_0)`
pub fn stacked_matrix(c: &ConvCode) -> ScalarMatrix {
    let g = coefficient_blocks(c);
    let refs: Vec<&ScalarMatrix> = g.iter().rev().collect();
    ScalarMatrix::vstack(&refs).expect("equal widths")
}

/// Dimension and distance of the code spanned by the stacked matrix.
pub fn c0_code(c: &ConvCode, cfg: &DistanceConfig) -> Result<(usize, usize)> {
    let basis = stacked_matrix(c).row_space_basis();
    Ok((basis.rows(), block_distance(&basis, cfg.cap)?))
}

/// `floor(S / mu) - (delta + 1)` clamped at zero, `S` the Singleton bound.
pub fn l_of_c(c: &ConvCode, mu: usize) -> usize {
    assert!(mu >= 1, "distance of a nonzero code is positive");
    (c.singleton_bound() / mu).saturating_sub(c.delta() + 1)
}

/// Row distances `d_0, ..., d_upto`.
///
/// A stage-`l` word whose message starts or ends with a zero block is a
/// shifted stage-`(l-1)` word, so each stage only searches messages with
/// both end blocks nonzero, below the previous distance.
pub fn row_distances(c: &ConvCode, upto: usize, cfg: &DistanceConfig) -> Result<Vec<usize>> {
    let mut out = vec![block_distance(&sliding_matrix(c, 0).body, cfg.cap)?];
    for l in 1..=upto {
        let prev = *out.last().expect("nonempty");
        let s = sliding_matrix(c, l).body;
        let found = min_weight(&s, Restriction::EndBlocksNonzero { block_rows: c.k() }, Some(prev), cfg.cap)?;
        out.push(found.map_or(prev, |w| w.weight));
    }
    Ok(out)
}

pub fn row_distance(c: &ConvCode, l: usize, cfg: &DistanceConfig) -> Result<usize> {
    Ok(*row_distances(c, l, cfg)?.last().expect("nonempty"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Stage bound from the stacked code; the value is certified.
    Theorem,
    /// Stages examined up to a fixed limit; an upper bound on the free distance.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    pub nu: usize,
    pub mu: usize,
    pub hypothesis_ok: bool,
    pub l_of_c: usize,
    pub row_distances: Vec<usize>,
    pub dfree: usize,
    pub singleton_bound: usize,
    pub is_mds: bool,
    pub method: Method,
}

impl DistanceProfile {
    /// Number of trailing stages sharing the final row distance.
    pub fn stable_tail(&self) -> usize {
        let last = self.dfree;
        self.row_distances.iter().rev().take_while(|&&d| d == last).count()
    }
}

/// Free distance: row distance at stage l(C) when the stacked code has full
/// dimension, otherwise the row distances up to the fallback stage.
pub fn free_distance(c: &ConvCode, cfg: &DistanceConfig) -> Result<DistanceProfile> {
    let (nu, mu) = c0_code(c, cfg)?;
    let hypothesis_ok = nu == c.k() * (c.delta() + 1);
    let l = l_of_c(c, mu);
    let (upto, method) = if hypothesis_ok { (l, Method::Theorem) } else { (cfg.fallback_max_stage, Method::Oracle) };
    let rd = row_distances(c, upto, cfg)?;
    let dfree = *rd.last().expect("nonempty");
    let bound = c.singleton_bound();
    Ok(DistanceProfile {
        nu,
        mu,
        hypothesis_ok,
        l_of_c: l,
        row_distances: rd,
        dfree,
        singleton_bound: bound,
        is_mds: dfree == bound,
        method,
    })
}

/// Minimum over stages `0..=max_stage` of the row distance, each stage
/// enumerated over all messages without reference to the stage bound.
/// `max_stage` defaults to `l(C) + 2` when the stacked code has full
/// dimension and to the fallback stage otherwise.
pub fn free_distance_oracle(c: &ConvCode, max_stage: Option<usize>, cfg: &DistanceConfig) -> Result<usize> {
    let max_stage = match max_stage {
        Some(s) => s,
        None => {
            let (nu, mu) = c0_code(c, cfg)?;
            if nu == c.k() * (c.delta() + 1) {
                l_of_c(c, mu) + 2
            } else {
                cfg.fallback_max_stage
            }
        }
    };
    let mut best: Option<usize> = None;
    for l in 0..=max_stage {
        let s = sliding_matrix(c, l).body;
        if let Some(w) = min_weight(&s, Restriction::None, best, cfg.cap)? {
            best = Some(w.weight);
        }
    }
    Ok(best.expect("stage 0 has a nonzero word"))
}

pub fn is_mds(c: &ConvCode, cfg: &DistanceConfig) -> Result<bool> {
    Ok(free_distance(c, cfg)?.is_mds)
}
