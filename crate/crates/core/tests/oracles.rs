//! Exhaustive cross-checks on codes small enough to enumerate every message.

mod common;

use common::*;
use convgoppa::cgc::{build, mds_criterion_equal_b, CgcSpec};
use convgoppa::distance::{block_distance, c0_code, free_distance, row_distances, DistanceConfig};
use convgoppa::{ConvCode, FiniteField, FqPoly, Gf, ScalarMatrix};

/// Every message of `k` polynomials of degree at most `deg`, not all zero.
fn messages(f: &FiniteField, k: usize, deg: usize) -> Vec<Vec<FqPoly>> {
    let q = f.order() as usize;
    let len = k * (deg + 1);
    let total = q.pow(len as u32);
    (1..total)
        .map(|mut idx| {
            let mut digits = Vec::with_capacity(len);
            for _ in 0..len {
                digits.push(Gf((idx % q) as u16));
                idx /= q;
            }
            digits.chunks(deg + 1).map(|c| FqPoly::new(f, c.to_vec())).collect()
        })
        .collect()
}

/// Minimum weight over messages of degree at most `deg`, i.e. the row
/// distance at stage `deg`.
fn brute_row_distance(c: &ConvCode, deg: usize) -> usize {
    messages(c.field(), c.k(), deg).iter().map(|m| codeword_weight(c, m)).min().unwrap()
}

fn brute_block_distance(s: &ScalarMatrix) -> usize {
    let f = s.field();
    let q = f.order() as usize;
    (1..q.pow(s.rows() as u32))
        .map(|mut idx| {
            let v: Vec<Gf> = (0..s.rows())
                .map(|_| {
                    let d = Gf((idx % q) as u16);
                    idx /= q;
                    d
                })
                .collect();
            s.left_mul(&v).iter().filter(|x| !x.is_zero()).count()
        })
        .min()
        .unwrap()
}

fn small_codes() -> Vec<ConvCode> {
    let mut out = Vec::new();
    for (q, delta, n) in [(2, 1, 2), (2, 2, 3), (3, 1, 3), (3, 2, 3), (4, 1, 3), (4, 2, 3)] {
        out.extend(random_row_codes(&gf(q), delta, n, 3, 1000 + q as u64 * 10 + delta as u64));
    }
    let f2 = gf(2);
    out.push(ConvCode::new(&matrix(&f2, &[&["1 + z + z^2", "1 + z^2"]])).unwrap());
    out.push(ConvCode::new(&matrix(&f2, &[&["1", "1 + z", "z"], &["0", "1", "1"]])).unwrap());
    out
}

#[test]
fn row_distances_match_enumeration() {
    let cfg = DistanceConfig::default();
    for c in small_codes() {
        let max_stage = if c.k() == 1 && c.field().order() <= 2 { 6 } else { 3 };
        let rd = row_distances(&c, max_stage, &cfg).unwrap();
        for (l, &d) in rd.iter().enumerate() {
            if c.field().order().pow((c.k() * (l + 1)) as u32) > 1 << 16 {
                break;
            }
            assert_eq!(d, brute_row_distance(&c, l), "stage {l} of {:?}", c.generator());
        }
    }
}

#[test]
fn free_distance_matches_enumeration() {
    let cfg = DistanceConfig::default();
    for c in small_codes() {
        let p = free_distance(&c, &cfg).unwrap();
        let deg = p.row_distances.len() - 1;
        if c.field().order().pow((c.k() * (deg + 1)) as u32) > 1 << 18 {
            continue;
        }
        assert_eq!(p.dfree, brute_row_distance(&c, deg), "{:?}", c.generator());
    }
}

#[test]
fn textbook_rate_half_code() {
    // the (7, 5) octal code has free distance 5
    let c = ConvCode::new(&matrix(&gf(2), &[&["1 + z + z^2", "1 + z^2"]])).unwrap();
    let p = free_distance(&c, &DistanceConfig::default()).unwrap();
    assert_eq!(p.dfree, 5);
    assert_eq!(c.singleton_bound(), 6);
    assert!(!p.is_mds);
}

#[test]
fn stacked_code_matches_enumeration() {
    let cfg = DistanceConfig::default();
    for c in small_codes() {
        let (nu, mu) = c0_code(&c, &cfg).unwrap();
        let basis = convgoppa::distance::stacked_matrix(&c).row_space_basis();
        assert_eq!(nu, basis.rows());
        assert_eq!(mu, brute_block_distance(&basis));
        assert_eq!(block_distance(&basis, cfg.cap).unwrap(), mu);
    }
}

#[test]
fn equal_b_criterion_agrees_with_free_distance() {
    let cfg = DistanceConfig::default();
    let f = gf(4);
    let b = f.pow_gen(1);
    let points: Vec<(Gf, Gf)> = f.nonzero().iter().map(|&a| (a, b)).collect();
    for l in convgoppa::cgc::projective_points(&f, 3) {
        let spec = CgcSpec::new(&f, points.clone(), l.clone()).unwrap();
        let Ok(code) = build(&spec) else { continue };
        if l[2].is_zero() {
            continue;
        }
        let p = free_distance(&code, &cfg).unwrap();
        assert_eq!(mds_criterion_equal_b(&spec).unwrap(), p.is_mds, "lambda {l:?}");
    }
}
