//! Table-driven arithmetic in GF(p^m).
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` where
//! `c_i` is the coefficient of `x^i` in the polynomial-basis representation.
//! Multiplication goes through log/antilog tables keyed by a primitive element
//! found at construction time.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Above this order addition is done digit by digit instead of by table.
const ADD_TABLE_LIMIT: u32 = 1024;

/// Raw field element: an index into the tables of some [`FiniteField`].
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, low-order coefficient first (length m+1).
    modulus: Vec<u32>,
    default_modulus: bool,
    /// exp[i] = g^i for i in 0..2(q-1).
    exp: Vec<Gf>,
    /// log[x] for x != 0; log[0] is unused.
    log: Vec<u32>,
    neg: Vec<Gf>,
    add: Option<Vec<Gf>>,
}

/// A finite field GF(p^m) with precomputed arithmetic tables.
///
/// Cloning is cheap (shared tables). Two handles compare equal when they
/// describe the same characteristic and modulus.
#[derive(Clone)]
pub struct FiniteField(Arc<Tables>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec_string())
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo `b` over GF(p); both low-order first, `b` nonzero.
fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    let lead_inv = inv_mod_p(b[db], p);
    while let Some(dr) = r.iter().rposition(|&c| c != 0) {
        if dr < db {
            break;
        }
        let factor = r[dr] * lead_inv % p;
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] = (r[i + shift] + p * p - factor * bc % p) % p;
        }
    }
    r.truncate(db.max(1));
    r
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    (1..p).find(|&x| a * x % p == 1).expect("prime modulus")
}

/// Trial division by every monic polynomial of degree 1..=m/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut div = vec![0u32; d + 1];
            let mut t = low;
            for c in div.iter_mut().take(d) {
                *c = t % p;
                t /= p;
            }
            div[d] = 1;
            if poly_rem_mod_p(modulus, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(x: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    let mut t = x;
    for _ in 0..m {
        out.push(t % p);
        t /= p;
    }
    out
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Polynomial-basis multiplication without tables; used while building them.
fn slow_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let m = (modulus.len() - 1) as u32;
    let da = digits(a, p, m);
    let db = digits(b, p, m);
    let mut prod = vec![0u32; 2 * m as usize];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let r = poly_rem_mod_p(&prod, modulus, p);
    let mut padded = r;
    padded.resize(m as usize, 0);
    from_digits(&padded, p)
}

fn slow_pow(a: u32, mut e: u64, p: u32, modulus: &[u32]) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(acc, base, p, modulus);
        }
        base = slow_mul(base, base, p, modulus);
        e >>= 1;
    }
    acc
}

fn has_full_order(x: u32, q: u32, factors: &[u32], p: u32, modulus: &[u32]) -> bool {
    x != 0 && factors.iter().all(|&r| slow_pow(x, ((q - 1) / r) as u64, p, modulus) != 1)
}

/// Default moduli for p in {2,3,5,7} and m <= 8, low-order coefficient first.
/// Every entry is primitive, so the class of `x` is the generator.
fn default_modulus_table(p: u32, m: u32) -> Option<&'static [u32]> {
    let t: &'static [u32] = match (p, m) {
        (2, 1) => &[1, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (2, 7) => &[1, 1, 0, 0, 0, 0, 0, 1],
        (2, 8) => &[1, 0, 1, 1, 1, 0, 0, 0, 1],
        (3, 1) => &[1, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (3, 5) => &[1, 2, 0, 0, 0, 1],
        (3, 6) => &[2, 2, 1, 0, 2, 0, 1],
        (3, 7) => &[1, 0, 2, 0, 0, 0, 0, 1],
        (3, 8) => &[2, 2, 2, 0, 1, 2, 0, 0, 1],
        (5, 1) => &[3, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (5, 4) => &[2, 4, 4, 0, 1],
        (5, 5) => &[3, 4, 0, 0, 0, 1],
        (5, 6) => &[2, 0, 1, 4, 1, 0, 1],
        (7, 1) => &[4, 1],
        (7, 2) => &[3, 6, 1],
        (7, 3) => &[4, 0, 6, 1],
        (7, 4) => &[3, 4, 5, 0, 1],
        (7, 5) => &[4, 1, 0, 0, 0, 1],
        _ => return None,
    };
    Some(t)
}

/// Default modulus for GF(p^m): the shipped table when it has an entry,
/// otherwise the first monic primitive polynomial in encoding order.
pub fn default_modulus(p: u32, m: u32) -> Result<Vec<u32>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = checked_order(p, m)?;
    if let Some(t) = default_modulus_table(p, m) {
        return Ok(t.to_vec());
    }
    if m == 1 {
        return Ok(vec![0, 1]);
    }
    let factors = prime_factors(q - 1);
    for low in 0..q {
        let mut modulus = digits(low, p, m);
        modulus.push(1);
        if modulus[0] == 0 {
            continue;
        }
        if is_irreducible(&modulus, p) && has_full_order(p, q, &factors, p, &modulus) {
            return Ok(modulus);
        }
    }
    Err(Error::Reducible)
}

fn checked_order(p: u32, m: u32) -> Result<u32> {
    if m == 0 {
        return Err(Error::Parse { line: 0, msg: "extension degree must be at least 1".into() });
    }
    let mut q: u64 = 1;
    for _ in 0..m {
        q *= p as u64;
        if q > MAX_ORDER as u64 {
            return Err(Error::TooLarge(format!("field order {p}^{m} exceeds {MAX_ORDER}")));
        }
    }
    Ok(q as u32)
}

impl FiniteField {
    /// Builds GF(p^m) from a monic modulus given low-order coefficient first.
    pub fn new(p: u32, m: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = checked_order(p, m)?;
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("modulus must be monic of degree {m}"),
            });
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Parse { line: 0, msg: format!("modulus coefficients must lie in [0, {p})") });
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::Reducible);
        }
        let default = default_modulus(p, m).map(|d| d == modulus).unwrap_or(false);

        let factors = prime_factors(q - 1);
        let generator = if q == 2 {
            1
        } else {
            (1..q)
                .find(|&x| has_full_order(x, q, &factors, p, modulus))
                .expect("multiplicative group of a field is cyclic")
        };

        let n = (q - 1) as usize;
        let mut exp = vec![Gf::ZERO; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = Gf(cur as u16);
            exp[i + n] = Gf(cur as u16);
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator, p, modulus);
        }
        debug_assert_eq!(cur, 1);

        let neg: Vec<Gf> = (0..q)
            .map(|x| {
                let d: Vec<u32> = digits(x, p, m).into_iter().map(|c| (p - c) % p).collect();
                Gf(from_digits(&d, p) as u16)
            })
            .collect();

        let mut tables = Tables {
            p,
            m,
            q,
            modulus: modulus.to_vec(),
            default_modulus: default,
            exp,
            log,
            neg,
            add: None,
        };
        if p != 2 && q <= ADD_TABLE_LIMIT {
            let mut add = vec![Gf::ZERO; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = Gf(digit_add(a, b, p, m) as u16);
                }
            }
            tables.add = Some(add);
        }
        Ok(FiniteField(Arc::new(tables)))
    }

    /// GF(p^m) with the default modulus.
    pub fn with_default(p: u32, m: u32) -> Result<Self> {
        let modulus = default_modulus(p, m)?;
        Self::new(p, m, &modulus)
    }

    /// GF(q) with the default modulus, `q` a prime power.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, m) = split_prime_power(q)
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("{q} is not a prime power") })?;
        Self::with_default(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, low-order first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn has_default_modulus(&self) -> bool {
        self.0.default_modulus
    }

    pub fn generator(&self) -> Gf {
        self.pow_gen(1)
    }

    /// `g^k` for the fixed generator `g`.
    #[inline]
    pub fn pow_gen(&self, k: u64) -> Gf {
        let n = (self.0.q - 1) as u64;
        self.0.exp[(k % n) as usize]
    }

    /// Discrete logarithm to the base of the generator; `None` for zero.
    #[inline]
    pub fn log(&self, x: Gf) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            Some(self.0.log[x.index()])
        }
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        if self.0.p == 2 {
            return Gf(a.0 ^ b.0);
        }
        match &self.0.add {
            Some(t) => t[a.index() * self.0.q as usize + b.index()],
            None => Gf(digit_add(a.0 as u32, b.0 as u32, self.0.p, self.0.m) as u16),
        }
    }

    #[inline]
    pub fn neg(&self, a: Gf) -> Gf {
        self.0.neg[a.index()]
    }

    #[inline]
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        let t = &self.0;
        t.exp[(t.log[a.index()] + t.log[b.index()]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Gf) -> Option<Gf> {
        if a.is_zero() {
            return None;
        }
        let t = &self.0;
        let n = t.q - 1;
        Some(t.exp[((n - t.log[a.index()]) % n) as usize])
    }

    /// `a / b`; `None` when `b` is zero.
    #[inline]
    pub fn div(&self, a: Gf, b: Gf) -> Option<Gf> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        match self.log(a) {
            None => Gf::ZERO,
            Some(l) => self.pow_gen(l as u64 * e),
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Gf {
        let p = self.0.p as i64;
        Gf(v.rem_euclid(p) as u16)
    }

    /// Whether `x` is a valid element index for this field.
    pub fn contains(&self, x: Gf) -> bool {
        (x.0 as u32) < self.0.q
    }

    /// All elements: zero first, then `g^0, g^1, ..., g^(q-2)`.
    pub fn enumerate(&self) -> Vec<Gf> {
        let n = (self.0.q - 1) as usize;
        std::iter::once(Gf::ZERO).chain(self.0.exp[..n].iter().copied()).collect()
    }

    /// Nonzero elements in generator-power order.
    pub fn nonzero(&self) -> &[Gf] {
        &self.0.exp[..(self.0.q - 1) as usize]
    }

    /// Polynomial-basis coefficients of `x`, low-order first.
    pub fn coeffs(&self, x: Gf) -> Vec<u32> {
        digits(x.0 as u32, self.0.p, self.0.m)
    }

    pub fn element(&self, x: Gf) -> FieldElement {
        FieldElement { value: x, field: self.clone() }
    }

    /// Canonical field spec string, e.g. `gf(8)` or `gf(2^3; modulus=1,0,1,1)`.
    pub fn spec_string(&self) -> String {
        if self.0.default_modulus {
            format!("gf({})", self.0.q)
        } else {
            let coeffs: Vec<String> = self.0.modulus.iter().rev().map(|c| c.to_string()).collect();
            format!("gf({}^{}; modulus={})", self.0.p, self.0.m, coeffs.join(","))
        }
    }

    /// Text form of an element: `0`, `1`, `a`, `a^k`; prime fields print residues.
    pub fn format(&self, x: Gf) -> String {
        if self.0.m == 1 || x.0 <= 1 {
            return x.0.to_string();
        }
        match self.log(x) {
            Some(1) => "a".to_string(),
            Some(k) => format!("a^{k}"),
            None => "0".to_string(),
        }
    }

    /// Parses an element in text form (`0`, `1`, `a`, `a^k` or a residue < p).
    pub fn parse(&self, s: &str) -> Result<Gf> {
        let s = s.trim();
        let bad = || Error::Parse { line: 0, msg: format!("bad field element `{s}`") };
        if s == "a" {
            return Ok(self.pow_gen(1));
        }
        if let Some(rest) = s.strip_prefix("a^") {
            let k: u64 = rest.trim().parse().map_err(|_| bad())?;
            return Ok(self.pow_gen(k));
        }
        let v: u32 = s.parse().map_err(|_| bad())?;
        if v >= self.0.p {
            return Err(bad());
        }
        Ok(Gf(v as u16))
    }
}

fn digit_add(a: u32, b: u32, p: u32, m: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..m {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Splits `q` into `(p, m)` with `q = p^m`, `p` prime.
pub fn split_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut m = 0;
    let mut t = q;
    while t % p == 0 {
        t /= p;
        m += 1;
    }
    (t == 1).then_some((p, m))
}

/// Parses `gf(q)`, `gf(p^m)` or `gf(p^m; modulus=c_m,...,c_0)`.
pub fn parse_field_spec(s: &str) -> Result<FiniteField> {
    let bad = |msg: &str| Error::Parse { line: 0, msg: format!("bad field spec `{s}`: {msg}") };
    let inner = s
        .trim()
        .strip_prefix("gf(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| bad("expected gf(...)"))?;
    let (order, modulus) = match inner.split_once(';') {
        Some((o, rest)) => {
            let rest = rest.trim();
            let list = rest.strip_prefix("modulus=").ok_or_else(|| bad("expected modulus=..."))?;
            let coeffs: std::result::Result<Vec<u32>, _> =
                list.split(',').map(|c| c.trim().parse::<u32>()).collect();
            (o.trim(), Some(coeffs.map_err(|_| bad("modulus coefficients must be integers"))?))
        }
        None => (inner.trim(), None),
    };
    let (p, m) = match order.split_once('^') {
        Some((p, m)) => (
            p.trim().parse::<u32>().map_err(|_| bad("characteristic"))?,
            m.trim().parse::<u32>().map_err(|_| bad("degree"))?,
        ),
        None => {
            let q: u32 = order.parse().map_err(|_| bad("order"))?;
            if q > MAX_ORDER {
                return Err(Error::TooLarge(format!("field order {q} exceeds {MAX_ORDER}")));
            }
            split_prime_power(q).ok_or_else(|| bad("order is not a prime power"))?
        }
    };
    match modulus {
        Some(mut c) => {
            c.reverse();
            FiniteField::new(p, m, &c)
        }
        None => FiniteField::with_default(p, m),
    }
}

/// An element together with its field; arithmetic checks that fields agree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldElement {
    pub value: Gf,
    pub field: FiniteField,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic between two elements of the same field.
pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let f = &a.field;
    let value = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.div(a.value, b.value).ok_or(Error::DivisionByZero)?,
    };
    Ok(FieldElement { value, field: f.clone() })
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

/// Injective ring homomorphism GF(p^a) -> GF(p^b), a | b, fixed by the
/// image of the source generator.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    source: FiniteField,
    target: FiniteField,
    image_of_generator: Gf,
    map: Vec<Gf>,
}

impl FieldEmbedding {
    /// Sends the source generator to the first root (in target enumeration
    /// order) of its minimal polynomial over the prime field.
    pub fn new(source: &FiniteField, target: &FiniteField) -> Result<Self> {
        if source.characteristic() != target.characteristic()
            || target.degree() % source.degree() != 0
        {
            return Err(Error::FieldMismatch);
        }
        let minpoly = minimal_polynomial(source, source.pow_gen(1));
        let root = target
            .enumerate()
            .into_iter()
            .find(|&x| eval_prime_poly(target, &minpoly, x).is_zero())
            .expect("a subfield of the right order exists");
        let mut map = vec![Gf::ZERO; source.order() as usize];
        for (k, &x) in source.nonzero().iter().enumerate() {
            map[x.index()] = target.pow(root, k as u64);
        }
        Ok(FieldEmbedding {
            source: source.clone(),
            target: target.clone(),
            image_of_generator: root,
            map,
        })
    }

    pub fn source(&self) -> &FiniteField {
        &self.source
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn image_of_generator(&self) -> Gf {
        self.image_of_generator
    }

    /// Image of a raw source element.
    #[inline]
    pub fn apply(&self, x: Gf) -> Gf {
        self.map[x.index()]
    }

    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field != self.source {
            return Err(Error::FieldMismatch);
        }
        Ok(self.target.element(self.apply(x.value)))
    }
}

/// Minimal polynomial of `x` over the prime field, low-order first, with
/// coefficients returned as prime-field residues.
pub fn minimal_polynomial(field: &FiniteField, x: Gf) -> Vec<u32> {
    let p = field.characteristic() as u64;
    let mut conjugates = vec![x];
    let mut c = field.pow(x, p);
    while c != x {
        conjugates.push(c);
        c = field.pow(c, p);
    }
    // prod (t - c)
    let mut poly = vec![Gf::ONE];
    for &c in &conjugates {
        let mut next = vec![Gf::ZERO; poly.len() + 1];
        for (i, &a) in poly.iter().enumerate() {
            next[i + 1] = field.add(next[i + 1], a);
            next[i] = field.sub(next[i], field.mul(a, c));
        }
        poly = next;
    }
    poly.into_iter()
        .map(|g| {
            debug_assert!((g.0 as u32) < field.characteristic());
            g.0 as u32
        })
        .collect()
}

fn eval_prime_poly(field: &FiniteField, coeffs: &[u32], x: Gf) -> Gf {
    coeffs
        .iter()
        .rev()
        .fold(Gf::ZERO, |acc, &c| field.add(field.mul(acc, x), Gf(c as u16)))
}
