//! One-dimensional convolutional Goppa codes on the projective line, and
//! exhaustive scans of parametrized code families.
//!
//! A code is given by points `a_i z + b_i` (`a_i != 0`) and a function
//! `s(t) = l_0 + l_1 t + ... + l_d t^d`; its generator row is
//! `(s(a_1 z + b_1), ..., s(a_n z + b_n))`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::code::ConvCode;
use crate::distance::{free_distance, DistanceConfig};
use crate::error::{Error, Result};
use crate::gf::{parse_field_spec, FiniteField, Gf};
use crate::polymat::{poly_gcd, FqPoly, PolyMatrix};
use crate::text::{content_lines, expect_key};

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(n: u64, k: u64, p: u64) -> u64 {
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..ki {
            num = num * ((ni - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        acc = acc * num % p * pow_mod(den, p - 2, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `s^{(j)}(t0) = sum_{r >= j} C(r, j) l_r t0^(r-j)`, binomials mod p.
pub fn hasse_eval(field: &FiniteField, lambda: &[Gf], j: usize, t0: Gf) -> Gf {
    let p = field.characteristic() as u64;
    let mut acc = Gf::ZERO;
    for (r, &l) in lambda.iter().enumerate().skip(j) {
        let c = binomial_mod_p(r as u64, j as u64, p);
        if c == 0 || l.is_zero() {
            continue;
        }
        let term = field.mul(field.mul(field.from_int(c as i64), l), field.pow(t0, (r - j) as u64));
        acc = field.add(acc, term);
    }
    acc
}

/// `s(a z + b)` as a polynomial in `z`.
pub fn eval_at_point(field: &FiniteField, lambda: &[Gf], (a, b): (Gf, Gf)) -> FqPoly {
    let coeffs = (0..lambda.len())
        .map(|j| field.mul(field.pow(a, j as u64), hasse_eval(field, lambda, j, b)))
        .collect();
    FqPoly::new(field, coeffs)
}

/// Evaluation points and a function `s` of degree at most `delta`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CgcSpec {
    field: FiniteField,
    points: Vec<(Gf, Gf)>,
    lambda: Vec<Gf>,
}

impl CgcSpec {
    pub fn new(field: &FiniteField, points: Vec<(Gf, Gf)>, lambda: Vec<Gf>) -> Result<Self> {
        validate_points(field, &points)?;
        if lambda.is_empty() || lambda.iter().all(|l| l.is_zero()) {
            return Err(Error::PreconditionViolated("lambda must not be all zero".into()));
        }
        if lambda.iter().any(|&l| !field.contains(l)) {
            return Err(Error::FieldMismatch);
        }
        if lambda.len() > points.len() {
            return Err(Error::PreconditionViolated(format!(
                "degree {} must be smaller than the number of points {}",
                lambda.len() - 1,
                points.len()
            )));
        }
        Ok(CgcSpec { field: field.clone(), points, lambda })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn points(&self) -> &[(Gf, Gf)] {
        &self.points
    }

    pub fn lambda(&self) -> &[Gf] {
        &self.lambda
    }

    pub fn delta(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn with_lambda(&self, lambda: Vec<Gf>) -> Result<Self> {
        CgcSpec::new(&self.field, self.points.clone(), lambda)
    }

    /// Common second coordinate of all points, if there is one.
    pub fn common_b(&self) -> Option<Gf> {
        let b = self.points[0].1;
        self.points.iter().all(|p| p.1 == b).then_some(b)
    }

    /// Generator row, possibly with a common factor (see [`in_parameter_space`]).
    pub fn generator_matrix(&self) -> PolyMatrix {
        let row = self.points.iter().map(|&p| eval_at_point(&self.field, &self.lambda, p)).collect();
        PolyMatrix::from_rows(&self.field, vec![row]).expect("one nonempty row")
    }
}

fn validate_points(field: &FiniteField, points: &[(Gf, Gf)]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::PreconditionViolated("no points".into()));
    }
    if points.iter().any(|&(a, b)| !field.contains(a) || !field.contains(b)) {
        return Err(Error::FieldMismatch);
    }
    if let Some(i) = points.iter().position(|p| p.0.is_zero()) {
        return Err(Error::PreconditionViolated(format!("point {} has a = 0", i + 1)));
    }
    for i in 0..points.len() {
        if points[i + 1..].contains(&points[i]) {
            return Err(Error::PreconditionViolated(format!("point {} is repeated", i + 1)));
        }
    }
    Ok(())
}

/// True iff the entries of the generator row have no common root.
///
/// Two entries share the root `z0` exactly when `a_i z0 + b_i = a_j z0 + b_j`
/// is a root of `s`, i.e. `t = (a_i b_j - a_j b_i) / (a_i - a_j)`; cleared of
/// denominators this is `sum_k l_k (a_i b_j - a_j b_i)^k (a_i - a_j)^(d-k) = 0`.
/// Pairs with `a_i = a_j` never share a root.
pub fn in_parameter_space(spec: &CgcSpec) -> bool {
    let f = &spec.field;
    let d = spec.delta() as u64;
    let pts = &spec.points;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let ((ai, bi), (aj, bj)) = (pts[i], pts[j]);
            if ai == aj {
                continue;
            }
            let num = f.sub(f.mul(ai, bj), f.mul(aj, bi));
            let den = f.sub(ai, aj);
            let sum = spec.lambda.iter().enumerate().fold(Gf::ZERO, |acc, (k, &l)| {
                let t = f.mul(l, f.mul(f.pow(num, k as u64), f.pow(den, d - k as u64)));
                f.add(acc, t)
            });
            if sum.is_zero() {
                return false;
            }
        }
    }
    true
}

/// The code of a spec inside the parameter space.
pub fn build(spec: &CgcSpec) -> Result<ConvCode> {
    if !in_parameter_space(spec) {
        return Err(Error::OutsideParameterSpace);
    }
    ConvCode::new(&spec.generator_matrix())
}

/// `(s^{(0)}(b), ..., s^{(d)}(b))` for a spec whose points share `b`.
pub fn hasse_values(spec: &CgcSpec) -> Result<Vec<Gf>> {
    let b = spec
        .common_b()
        .ok_or_else(|| Error::PreconditionViolated("points do not share b".into()))?;
    Ok((0..=spec.delta()).map(|j| hasse_eval(&spec.field, &spec.lambda, j, b)).collect())
}

/// For points `a_i z + b` with distinct `a_i`: MDS iff every `s^{(j)}(b)` is nonzero.
pub fn mds_criterion_equal_b(spec: &CgcSpec) -> Result<bool> {
    let a: Vec<Gf> = spec.points.iter().map(|p| p.0).collect();
    for i in 0..a.len() {
        if a[i + 1..].contains(&a[i]) {
            return Err(Error::PreconditionViolated("a_i are not pairwise distinct".into()));
        }
    }
    Ok(hasse_values(spec)?.iter().all(|h| !h.is_zero()))
}

/// Representatives of projective space of dimension `len - 1`: first
/// nonzero coordinate 1, lexicographic in enumeration order.
pub fn projective_points(field: &FiniteField, len: usize) -> Vec<Vec<Gf>> {
    let els = field.enumerate();
    let mut out = Vec::new();
    for lead in 0..len {
        let free = len - lead - 1;
        let count = els.len().pow(free as u32);
        for idx in 0..count {
            let mut v = vec![Gf::ZERO; len];
            v[lead] = Gf::ONE;
            let mut t = idx;
            for pos in (lead + 1..len).rev() {
                v[pos] = els[t % els.len()];
                t /= els.len();
            }
            out.push(v);
        }
    }
    out
}

/// A family member at one parameter tuple.
#[derive(Clone, Debug)]
pub enum Member {
    /// `degenerate` marks a generator whose entries had a common factor,
    /// removed before building the code.
    Code { code: ConvCode, degenerate: bool },
    Excluded(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanDomain {
    /// Whole parameter space.
    All,
    /// Only tuples whose last coordinate is nonzero.
    TopNonzero,
    List(Vec<Vec<Gf>>),
}

pub trait Family: Sync {
    fn field(&self) -> &FiniteField;
    fn describe(&self) -> String;
    /// Bound the members are measured against.
    fn singleton_bound(&self) -> usize;
    /// Names of the parameters, usable as variables in predicted conditions.
    fn param_names(&self) -> Vec<String>;
    fn domain(&self, d: &ScanDomain) -> Vec<Vec<Gf>>;
    fn member(&self, params: &[Gf]) -> Member;
}

/// Generator `(s(a_1 z + b_1), ...)` over all `lambda` in projective space.
#[derive(Clone, Debug)]
pub struct CgcFamily {
    field: FiniteField,
    points: Vec<(Gf, Gf)>,
    delta: usize,
}

impl CgcFamily {
    pub fn new(field: &FiniteField, points: Vec<(Gf, Gf)>, delta: usize) -> Result<Self> {
        validate_points(field, &points)?;
        if delta >= points.len() {
            return Err(Error::PreconditionViolated("degree must be smaller than the number of points".into()));
        }
        Ok(CgcFamily { field: field.clone(), points, delta })
    }

    pub fn points(&self) -> &[(Gf, Gf)] {
        &self.points
    }

    pub fn delta(&self) -> usize {
        self.delta
    }
}

impl Family for CgcFamily {
    fn field(&self) -> &FiniteField {
        &self.field
    }

    fn describe(&self) -> String {
        let f = &self.field;
        let pts: Vec<String> =
            self.points.iter().map(|&(a, b)| format!("({},{})", f.format(a), f.format(b))).collect();
        format!("cgc over {} points {} delta {}", f.spec_string(), pts.join(", "), self.delta)
    }

    fn singleton_bound(&self) -> usize {
        self.points.len() * (self.delta + 1)
    }

    fn param_names(&self) -> Vec<String> {
        (0..=self.delta).map(|i| format!("l{i}")).collect()
    }

    fn domain(&self, d: &ScanDomain) -> Vec<Vec<Gf>> {
        match d {
            ScanDomain::All => projective_points(&self.field, self.delta + 1),
            ScanDomain::TopNonzero => projective_points(&self.field, self.delta + 1)
                .into_iter()
                .filter(|l| !l[self.delta].is_zero())
                .collect(),
            ScanDomain::List(v) => v.clone(),
        }
    }

    fn member(&self, params: &[Gf]) -> Member {
        let spec = match CgcSpec::new(&self.field, self.points.clone(), params.to_vec()) {
            Ok(s) => s,
            Err(e) => return Member::Excluded(e.to_string()),
        };
        let g = spec.generator_matrix();
        let degenerate = !in_parameter_space(&spec);
        let g = if degenerate { remove_row_content(&g) } else { g };
        match ConvCode::new(&g) {
            Ok(code) => Member::Code { code, degenerate },
            Err(e) => Member::Excluded(e.to_string()),
        }
    }
}

/// Divides a one-row matrix by the gcd of its entries.
fn remove_row_content(g: &PolyMatrix) -> PolyMatrix {
    let row = g.row(0);
    let mut c = FqPoly::zero(g.field());
    for e in row.iter().filter(|e| !e.is_zero()) {
        c = poly_gcd(&c, e).expect("nonzero entry");
    }
    if c.is_zero() {
        return g.clone();
    }
    let row = row.iter().map(|e| e.div_rem(&c).expect("nonzero gcd").0).collect();
    PolyMatrix::from_rows(g.field(), vec![row]).expect("same shape")
}

/// The 2x4 family over a field of characteristic 2, parameter `l != 0`:
///
/// ```text
/// ( l + z            l + 1 + z   l z             1 + (l+1) z   )
/// ( l^2 + (l+1) z    1 + z       l + (l+1) z     (l+1)^2 + l z )
/// ```
#[derive(Clone, Debug)]
pub struct CaseStudyFamily {
    field: FiniteField,
}

impl CaseStudyFamily {
    pub fn new(field: &FiniteField) -> Result<Self> {
        if field.characteristic() != 2 {
            return Err(Error::PreconditionViolated("the 2x4 family needs characteristic 2".into()));
        }
        Ok(CaseStudyFamily { field: field.clone() })
    }

    pub fn matrix(&self, l: Gf) -> PolyMatrix {
        let f = &self.field;
        let p = |c0: Gf, c1: Gf| FqPoly::new(f, vec![c0, c1]);
        let one = Gf::ONE;
        let l1 = f.add(l, one);
        let rows = vec![
            vec![p(l, one), p(l1, one), p(Gf::ZERO, l), p(one, l1)],
            vec![p(f.mul(l, l), l1), p(one, one), p(l, l1), p(f.mul(l1, l1), l)],
        ];
        PolyMatrix::from_rows(f, rows).expect("2x4")
    }
}

impl Family for CaseStudyFamily {
    fn field(&self) -> &FiniteField {
        &self.field
    }

    fn describe(&self) -> String {
        format!("2x4 case-study family over {}", self.field.spec_string())
    }

    fn singleton_bound(&self) -> usize {
        7
    }

    fn param_names(&self) -> Vec<String> {
        vec!["l".into()]
    }

    fn domain(&self, d: &ScanDomain) -> Vec<Vec<Gf>> {
        match d {
            ScanDomain::All | ScanDomain::TopNonzero => self.field.nonzero().iter().map(|&x| vec![x]).collect(),
            ScanDomain::List(v) => v.clone(),
        }
    }

    fn member(&self, params: &[Gf]) -> Member {
        match params {
            [l] if !l.is_zero() => match ConvCode::new(&self.matrix(*l)) {
                Ok(code) => Member::Code { code, degenerate: false },
                Err(e) => Member::Excluded(e.to_string()),
            },
            [_] => Member::Excluded("parameter must be nonzero".into()),
            _ => Member::Excluded("expected one parameter".into()),
        }
    }
}

/// A polynomial in the family parameters with field coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    source: String,
    terms: Vec<(Gf, Vec<u32>)>,
}

impl MultiPoly {
    /// Parses e.g. `l0 + a*l1 + a^2*l2` or `l^3 + l^2 + 1`.
    pub fn parse(field: &FiniteField, names: &[String], s: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse { line: 0, msg: m };
        let mut terms = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad(format!("empty term in `{s}`")));
            }
            let mut coef = Gf::ONE;
            let mut exps = vec![0u32; names.len()];
            for factor in term.split('*') {
                let factor = factor.trim();
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b.trim(), Some(e.trim())),
                    None => (factor, None),
                };
                if let Some(v) = names.iter().position(|n| n == base) {
                    let e: u32 = match exp {
                        Some(e) => e.parse().map_err(|_| bad(format!("bad exponent in `{factor}`")))?,
                        None => 1,
                    };
                    exps[v] += e;
                } else if let Ok(i) = factor.parse::<i64>() {
                    coef = field.mul(coef, field.from_int(i));
                } else {
                    coef = field.mul(coef, field.parse(factor).map_err(|_| bad(format!("unknown factor `{factor}`")))?);
                }
            }
            terms.push((coef, exps));
        }
        Ok(MultiPoly { source: s.trim().to_string(), terms })
    }

    /// Conditions separated by `;`.
    pub fn parse_list(field: &FiniteField, names: &[String], s: &str) -> Result<Vec<Self>> {
        s.split(';').filter(|c| !c.trim().is_empty()).map(|c| Self::parse(field, names, c)).collect()
    }

    pub fn eval(&self, field: &FiniteField, x: &[Gf]) -> Gf {
        self.terms.iter().fold(Gf::ZERO, |acc, (c, e)| {
            let t = e.iter().zip(x).fold(*c, |t, (&k, &v)| field.mul(t, field.pow(v, k as u64)));
            field.add(acc, t)
        })
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Mds { dfree: usize },
    NonMds { dfree: usize, degenerate: bool },
    Excluded(String),
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub family: String,
    pub singleton_bound: usize,
    /// Every scanned tuple with its outcome, in domain order.
    pub results: Vec<(Vec<Gf>, Outcome)>,
    /// Per predicted condition: its zeros among classified tuples are all non-MDS.
    pub condition_matches: Vec<bool>,
    /// The non-MDS tuples are exactly the zeros of the product of the conditions.
    pub matched_equations: Option<bool>,
    /// Classified tuples where prediction and observation disagree.
    pub mismatches: Vec<Vec<Gf>>,
}

impl ScanReport {
    fn select(&self, pred: impl Fn(&Outcome) -> bool) -> Vec<Vec<Gf>> {
        self.results.iter().filter(|(_, o)| pred(o)).map(|(t, _)| t.clone()).collect()
    }

    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn mds_set(&self) -> Vec<Vec<Gf>> {
        self.select(|o| matches!(o, Outcome::Mds { .. }))
    }

    pub fn non_mds_set(&self) -> Vec<Vec<Gf>> {
        self.select(|o| matches!(o, Outcome::NonMds { .. }))
    }

    pub fn degenerate_set(&self) -> Vec<Vec<Gf>> {
        self.select(|o| matches!(o, Outcome::NonMds { degenerate: true, .. }))
    }

    pub fn excluded(&self) -> BTreeMap<Vec<Gf>, String> {
        self.results
            .iter()
            .filter_map(|(t, o)| match o {
                Outcome::Excluded(r) => Some((t.clone(), r.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn failures(&self) -> BTreeMap<Vec<Gf>, String> {
        self.results
            .iter()
            .filter_map(|(t, o)| match o {
                Outcome::Failed(r) => Some((t.clone(), r.clone())),
                _ => None,
            })
            .collect()
    }
}

pub fn classify(family: &dyn Family, params: &[Gf], cfg: &DistanceConfig) -> Outcome {
    match family.member(params) {
        Member::Excluded(r) => Outcome::Excluded(r),
        Member::Code { code, degenerate } => match free_distance(&code, cfg) {
            Ok(p) if p.dfree == family.singleton_bound() && !degenerate => Outcome::Mds { dfree: p.dfree },
            Ok(p) => Outcome::NonMds { dfree: p.dfree, degenerate },
            Err(e) => Outcome::Failed(e.to_string()),
        },
    }
}

/// Classifies every tuple of `domain`; with `predicted`, compares the
/// non-MDS tuples against the zeros of the conditions' product.
pub fn scan_family(
    family: &dyn Family,
    domain: &ScanDomain,
    predicted: Option<&[MultiPoly]>,
    cfg: &DistanceConfig,
) -> ScanReport {
    let tuples = family.domain(domain);
    let results: Vec<(Vec<Gf>, Outcome)> =
        tuples.into_par_iter().map(|t| {
            let o = classify(family, &t, cfg);
            (t, o)
        }).collect();
    let f = family.field();
    let mut condition_matches = Vec::new();
    let mut matched_equations = None;
    let mut mismatches = Vec::new();
    if let Some(conds) = predicted {
        condition_matches = vec![true; conds.len()];
        for (t, o) in &results {
            let non_mds = match o {
                Outcome::Mds { .. } => false,
                Outcome::NonMds { .. } => true,
                _ => continue,
            };
            let zeros: Vec<bool> = conds.iter().map(|c| c.eval(f, t).is_zero()).collect();
            for (m, &z) in condition_matches.iter_mut().zip(&zeros) {
                if z && !non_mds {
                    *m = false;
                }
            }
            if zeros.iter().any(|&z| z) != non_mds {
                mismatches.push(t.clone());
            }
        }
        matched_equations = Some(mismatches.is_empty());
    }
    ScanReport {
        family: family.describe(),
        singleton_bound: family.singleton_bound(),
        results,
        condition_matches,
        matched_equations,
        mismatches,
    }
}

/// Contents of a CGC spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgcFile {
    pub field: FiniteField,
    pub kind: FamilyKind,
    pub scan: Option<ScanDomain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Cgc { points: Vec<(Gf, Gf)>, lambda: Option<Vec<Gf>>, delta: usize },
    CaseStudy,
}

impl CgcFile {
    pub fn spec(&self) -> Result<CgcSpec> {
        match &self.kind {
            FamilyKind::Cgc { points, lambda: Some(l), .. } => CgcSpec::new(&self.field, points.clone(), l.clone()),
            FamilyKind::Cgc { lambda: None, .. } => {
                Err(Error::PreconditionViolated("spec file has no lambda line".into()))
            }
            FamilyKind::CaseStudy => Err(Error::PreconditionViolated("the case-study family is not a CGC".into())),
        }
    }

    pub fn family(&self) -> Result<Box<dyn Family>> {
        Ok(match &self.kind {
            FamilyKind::Cgc { points, delta, .. } => Box::new(CgcFamily::new(&self.field, points.clone(), *delta)?),
            FamilyKind::CaseStudy => Box::new(CaseStudyFamily::new(&self.field)?),
        })
    }
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, msg: msg.into() }
}

/// Splits `(x,y), (u,v)` into the parenthesized groups.
fn tuples(s: &str) -> Result<Vec<Vec<&str>>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(|| perr("expected `(`"))?;
        let close = inner.find(')').ok_or_else(|| perr("missing `)`"))?;
        out.push(inner[..close].split(',').map(str::trim).collect());
        rest = inner[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        } else if !rest.is_empty() {
            return Err(perr("expected `,` between tuples"));
        }
    }
    Ok(out)
}

fn parse_elements(field: &FiniteField, items: &[&str]) -> Result<Vec<Gf>> {
    items.iter().map(|s| field.parse(s)).collect()
}

/// Reads a CGC spec file:
///
/// ```text
/// field: gf(4)
/// points: (1,a), (a,a), (a^2,a)
/// lambda: 1, a, 1
/// scan: all
/// ```
///
/// `delta: d` may replace `lambda` for scans; `family: case-study` selects
/// the 2x4 family instead of points.
pub fn parse_cgc_file(text: &str) -> Result<CgcFile> {
    let mut lines = content_lines(text);
    let (ln, l) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing field line".into() })?;
    let field = expect_key(l, "field").and_then(parse_field_spec).map_err(|e| e.at_line(ln))?;
    let mut points = None;
    let mut lambda: Option<Vec<Gf>> = None;
    let mut delta = None;
    let mut case_study = false;
    let mut scan = None;
    let mut last = ln;
    for (ln, l) in lines {
        last = ln;
        let (key, value) = l.split_once(':').ok_or(Error::Parse { line: ln, msg: "expected `key: value`".into() })?;
        let value = value.trim();
        let r: Result<()> = (|| {
            match key.trim() {
                "points" => {
                    let pts = tuples(value)?
                        .into_iter()
                        .map(|t| match parse_elements(&field, &t)?[..] {
                            [a, b] => Ok((a, b)),
                            _ => Err(perr("a point is a pair (a,b)")),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    points = Some(pts);
                }
                "lambda" => {
                    let items: Vec<&str> = value.split(',').map(str::trim).collect();
                    lambda = Some(parse_elements(&field, &items)?);
                }
                "delta" => delta = Some(value.parse::<usize>().map_err(|_| perr("bad delta"))?),
                "family" if value == "case-study" => case_study = true,
                "family" => return Err(perr(format!("unknown family `{value}`"))),
                "scan" => {
                    scan = Some(match value {
                        "all" => ScanDomain::All,
                        "top-nonzero" => ScanDomain::TopNonzero,
                        _ => ScanDomain::List(
                            tuples(value)?.iter().map(|t| parse_elements(&field, t)).collect::<Result<_>>()?,
                        ),
                    })
                }
                k => return Err(perr(format!("unknown key `{k}`"))),
            }
            Ok(())
        })();
        r.map_err(|e| e.at_line(ln))?;
    }
    let kind = if case_study {
        if points.is_some() || lambda.is_some() {
            return Err(Error::Parse { line: last, msg: "case-study family takes no points or lambda".into() });
        }
        FamilyKind::CaseStudy
    } else {
        let points = points.ok_or(Error::Parse { line: last, msg: "missing points line".into() })?;
        let delta = match (&lambda, delta) {
            (Some(l), Some(d)) if l.len() != d + 1 => {
                return Err(Error::Parse { line: last, msg: "delta disagrees with lambda".into() })
            }
            (Some(l), _) => l.len() - 1,
            (None, Some(d)) => d,
            (None, None) => return Err(Error::Parse { line: last, msg: "need lambda or delta".into() }),
        };
        FamilyKind::Cgc { points, lambda, delta }
    };
    Ok(CgcFile { field, kind, scan })
}

pub fn format_cgc_spec(spec: &CgcSpec) -> String {
    let f = &spec.field;
    let pts: Vec<String> = spec.points.iter().map(|&(a, b)| format!("({},{})", f.format(a), f.format(b))).collect();
    let lam: Vec<String> = spec.lambda.iter().map(|&l| f.format(l)).collect();
    format!("field: {}\npoints: {}\nlambda: {}\n", f.spec_string(), pts.join(", "), lam.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    fn gf(q: u32) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    #[test]
    fn lucas() {
        assert_eq!(binomial_mod_p(4, 2, 5), 1);
        assert_eq!(binomial_mod_p(2, 1, 2), 0);
        assert_eq!(binomial_mod_p(3, 1, 2), 1);
        assert_eq!(binomial_mod_p(10, 3, 7), 120 % 7);
        assert_eq!(binomial_mod_p(3, 5, 7), 0);
        for n in 0..30u64 {
            for k in 0..=n {
                let exact = (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
                assert_eq!(binomial_mod_p(n, k, 3) as u128, exact % 3, "C({n},{k})");
            }
        }
    }

    #[test]
    fn hasse_values_gf4() {
        let f = gf(4);
        let a = f.pow_gen(1);
        let lam = [Gf::ONE, a, Gf::ONE];
        assert_eq!(hasse_eval(&f, &lam, 0, a), Gf::ONE);
        assert_eq!(hasse_eval(&f, &lam, 1, a), a);
        assert_eq!(hasse_eval(&f, &lam, 2, a), Gf::ONE);
    }

    #[test]
    fn gf4_example_matrix() {
        let f = gf(4);
        let a = f.pow_gen(1);
        let spec = CgcSpec::new(&f, vec![(Gf::ONE, a), (a, a), (f.pow_gen(2), a)], vec![Gf::ONE, a, Gf::ONE]).unwrap();
        let c = build(&spec).unwrap();
        let expect: Vec<FqPoly> = ["1 + a*z + z^2", "1 + a^2*z + a^2*z^2", "1 + z + a*z^2"]
            .iter()
            .map(|s| parse_poly(&f, s).unwrap())
            .collect();
        assert_eq!(c.generator().row(0), &expect[..]);
        assert!(mds_criterion_equal_b(&spec).unwrap());
    }

    #[test]
    fn gf5_hasse_rows() {
        let f = gf(5);
        let l: Vec<Gf> = [1, 2, 3, 4].iter().map(|&v| Gf(v)).collect();
        // l1 + 2 l2 + 3 l3 = 2 + 6 + 12 = 20 = 0 mod 5
        assert_eq!(hasse_eval(&f, &l, 1, Gf(1)), Gf(0));
        assert_eq!(hasse_eval(&f, &l, 3, Gf(3)), Gf(4));
        // l2 + 3 l3 = 3 + 12 = 0
        assert_eq!(hasse_eval(&f, &l, 2, Gf(1)), Gf(0));
    }

    #[test]
    fn parameter_space_detects_shared_roots() {
        let f = gf(8);
        let al = f.pow_gen(1);
        // s(t) = t - 1 = t + 1 shares the root z0 with (a1 z0 + b1) = (a2 z0 + b2) = 1
        // for points (1, 0) and (a, 1 + a): z0 = 1
        let pts = vec![(Gf::ONE, Gf::ZERO), (al, f.add(Gf::ONE, al)), (f.pow_gen(3), Gf::ONE)];
        let spec = CgcSpec::new(&f, pts, vec![Gf::ONE, Gf::ONE]).unwrap();
        assert!(!in_parameter_space(&spec));
        assert!(matches!(build(&spec), Err(Error::OutsideParameterSpace)));
        let g = spec.generator_matrix();
        assert!(g.row(0)[0].eval(Gf::ONE).is_zero() && g.row(0)[1].eval(Gf::ONE).is_zero());
    }

    #[test]
    fn projective_enumeration() {
        let f = gf(5);
        let pts = projective_points(&f, 4);
        assert_eq!(pts.len(), 156);
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 156);
        assert_eq!(projective_points(&gf(8), 3).len(), 73);
        assert_eq!(pts[0], vec![Gf(1), Gf(0), Gf(0), Gf(0)]);
    }

    #[test]
    fn case_study_matrix_at_alpha() {
        let f = gf(8);
        let fam = CaseStudyFamily::new(&f).unwrap();
        let text = "field: gf(8)\nshape: 2 x 4\n\
             row: a + z, a^3 + z, a*z, 1 + a^3*z\n\
             row: a^2 + a^3*z, 1 + z, a + a^3*z, a^6 + a*z\n";
        assert_eq!(fam.matrix(f.pow_gen(1)), crate::text::parse_code_file(text).unwrap());
    }

    #[test]
    fn multipoly_parsing() {
        let f = gf(5);
        let names: Vec<String> = (0..4).map(|i| format!("l{i}")).collect();
        let c = MultiPoly::parse_list(&f, &names, "l0 + l1 + l2 + l3; l1 + 2*l2 + 3*l3; l2 + 3*l3; l3").unwrap();
        assert_eq!(c.len(), 4);
        let x = [Gf(1), Gf(2), Gf(3), Gf(4)];
        assert_eq!(c[0].eval(&f, &x), Gf(0));
        assert_eq!(c[1].eval(&f, &x), Gf(0));
        assert_eq!(c[3].eval(&f, &x), Gf(4));
        let g = gf(8);
        let p = MultiPoly::parse(&g, &["l".into()], "l^3 + l^2 + 1").unwrap();
        assert_eq!(p.eval(&g, &[Gf::ONE]), Gf::ONE);
        assert!(MultiPoly::parse(&g, &["l".into()], "q + 1").is_err());
    }

    #[test]
    fn cgc_file_round_trip() {
        let text = "field: gf(4)\npoints: (1,a), (a,a), (a^2,a)\nlambda: 1, a, 1\n";
        let file = parse_cgc_file(text).unwrap();
        assert_eq!(format_cgc_spec(&file.spec().unwrap()), text);
        let e = parse_cgc_file("field: gf(4)\npoints: (1,a), (a,b)\nlambda: 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let scan = parse_cgc_file("field: gf(8)\nfamily: case-study\nscan: (a), (a^2)\n").unwrap();
        assert_eq!(scan.kind, FamilyKind::CaseStudy);
        assert_eq!(scan.scan, Some(ScanDomain::List(vec![vec![Gf(2)], vec![Gf(4)]])));
    }
}
