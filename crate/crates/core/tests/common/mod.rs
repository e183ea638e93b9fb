#![allow(dead_code)]

use convgoppa::cgc::{build, CgcSpec};
use convgoppa::distance::{c0_code, DistanceConfig};
use convgoppa::text::parse_poly;
use convgoppa::{ConvCode, FiniteField, FqPoly, Gf, PolyMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn gf(q: u32) -> FiniteField {
    FiniteField::of_order(q).unwrap()
}

pub fn poly(f: &FiniteField, s: &str) -> FqPoly {
    parse_poly(f, s).unwrap()
}

pub fn matrix(f: &FiniteField, rows: &[&[&str]]) -> PolyMatrix {
    PolyMatrix::from_rows(f, rows.iter().map(|r| r.iter().map(|s| poly(f, s)).collect()).collect()).unwrap()
}

pub fn gf4_example() -> CgcSpec {
    let f = gf(4);
    let a = f.pow_gen(1);
    CgcSpec::new(&f, vec![(Gf::ONE, a), (a, a), (f.pow_gen(2), a)], vec![Gf::ONE, a, Gf::ONE]).unwrap()
}

pub fn base_312() -> CgcSpec {
    let f = gf(8);
    let a = f.pow_gen(1);
    CgcSpec::new(&f, vec![(Gf::ONE, a), (a, a), (f.pow_gen(2), a)], vec![Gf::ONE; 3]).unwrap()
}

/// Points `i z + 1`, i = 1..4, over GF(5).
pub fn gf5_points() -> Vec<(Gf, Gf)> {
    (1..=4).map(|i| (Gf(i), Gf::ONE)).collect()
}

/// Points `a^(i-1) z + a`, i = 1..7, over GF(8).
pub fn seven_points() -> Vec<(Gf, Gf)> {
    let f = gf(8);
    (0..7).map(|i| (f.pow_gen(i), f.pow_gen(1))).collect()
}

pub fn case_study_text() -> &'static str {
    "field: gf(8)\nshape: 2 x 4\n\
     row: a + z, a^3 + z, a*z, 1 + a^3*z\n\
     row: a^2 + a^3*z, 1 + z, a + a^3*z, a^6 + a*z\n"
}

fn random_poly(f: &FiniteField, rng: &mut StdRng, deg: usize, exact: bool) -> FqPoly {
    let q = f.order();
    let mut c: Vec<Gf> = (0..=deg).map(|_| Gf(rng.gen_range(0..q) as u16)).collect();
    if exact {
        c[deg] = Gf(rng.gen_range(1..q) as u16);
    }
    FqPoly::new(f, c)
}

fn full_stacked_rank(c: &ConvCode) -> bool {
    let (nu, _) = c0_code(c, &DistanceConfig::default()).unwrap();
    nu == c.k() * (c.delta() + 1)
}

/// Random basic 1 x n codes with degree `delta` and a full-rank stacked matrix.
pub fn random_row_codes(f: &FiniteField, delta: usize, n: usize, count: usize, seed: u64) -> Vec<ConvCode> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let row: Vec<FqPoly> = (0..n).map(|j| random_poly(f, &mut rng, delta, j == 0)).collect();
        let g = PolyMatrix::from_rows(f, vec![row]).unwrap();
        if let Ok(c) = ConvCode::new(&g) {
            if c.delta() == delta && full_stacked_rank(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Random basic 2 x n codes with the given Forney indices; with `full`, only
/// codes whose stacked matrix has full rank.
pub fn random_pair_codes(
    f: &FiniteField,
    forney: [usize; 2],
    n: usize,
    count: usize,
    seed: u64,
    full: bool,
) -> Vec<ConvCode> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let rows: Vec<Vec<FqPoly>> = forney
            .iter()
            .enumerate()
            .map(|(i, &d)| (0..n).map(|j| random_poly(f, &mut rng, d, j == i)).collect())
            .collect();
        let Ok(g) = PolyMatrix::from_rows(f, rows) else { continue };
        if let Ok(c) = ConvCode::new(&g) {
            if c.forney() == forney && (!full || full_stacked_rank(&c)) {
                out.push(c);
            }
        }
    }
    out
}

/// Every code with a full-rank stacked matrix that the suite checks the
/// stage bound on: the worked examples plus seeded random matrices.
pub fn corpus() -> Vec<(String, ConvCode)> {
    let mut out: Vec<(String, ConvCode)> = Vec::new();
    let f8 = gf(8);
    let a8 = f8.pow_gen(1);
    out.push(("gf4 [3,1,2]".into(), build(&gf4_example()).unwrap()));
    out.push(("gf8 [3,1,2]".into(), build(&base_312()).unwrap()));
    let ext = CgcSpec::new(
        &f8,
        vec![(Gf::ONE, a8), (a8, a8), (f8.pow_gen(2), a8), (f8.pow_gen(2), f8.pow_gen(4))],
        vec![Gf::ONE; 3],
    )
    .unwrap();
    out.push(("gf8 [4,1,2]".into(), build(&ext).unwrap()));
    let a2 = f8.pow_gen(2);
    out.push((
        "gf8 [7,1,2]".into(),
        build(&CgcSpec::new(&f8, seven_points(), vec![a2, a2, a2]).unwrap()).unwrap(),
    ));
    out.push((
        "gf5 [4,1,3]".into(),
        build(&CgcSpec::new(&gf(5), gf5_points(), vec![Gf::ONE; 4]).unwrap()).unwrap(),
    ));
    let mut seed = 1;
    for q in [4u32, 5, 8] {
        let f = gf(q);
        for delta in 1..=3 {
            for n in [delta + 1, delta + 2] {
                for c in random_row_codes(&f, delta, n, 2, seed) {
                    out.push((format!("gf{q} random 1x{n} delta {delta}"), c));
                }
                seed += 1;
            }
        }
        // with k = 2 the stacked matrix has full rank only for delta = 0
        for n in [3, 4] {
            for c in random_pair_codes(&f, [0, 0], n, 2, seed, true) {
                out.push((format!("gf{q} random 2x{n} delta 0"), c));
            }
            seed += 1;
        }
    }
    out
}

/// 2 x 4 codes of positive degree, outside the stage bound's hypothesis.
pub fn pair_codes_without_bound() -> Vec<(String, ConvCode)> {
    let mut out = Vec::new();
    let mut seed = 100;
    for q in [4u32, 5, 8] {
        let f = gf(q);
        for forney in [[0, 1], [1, 1]] {
            for c in random_pair_codes(&f, forney, 4, 1, seed, false) {
                out.push((format!("gf{q} random 2x4 forney {forney:?}"), c));
            }
            seed += 1;
        }
    }
    out
}

/// Weight of the codeword `m(z) G(z)` for a polynomial message `m`.
pub fn codeword_weight(c: &ConvCode, msg: &[FqPoly]) -> usize {
    let g = c.generator();
    let f = c.field();
    (0..c.n())
        .map(|j| {
            msg.iter()
                .enumerate()
                .fold(FqPoly::zero(f), |acc, (i, m)| acc.add(&m.mul(g.entry(i, j))))
                .weight()
        })
        .sum()
}
