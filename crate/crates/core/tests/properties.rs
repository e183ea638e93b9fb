mod common;

use common::*;
use convgoppa::code::to_canonical;
use convgoppa::distance::{free_distance, row_distances, sliding_matrix, DistanceConfig};
use convgoppa::polymat::{det_bareiss, det_cofactor, poly_gcd, weight};
use convgoppa::text::{format_code_file, parse_code_file};
use convgoppa::{ConvCode, FieldEmbedding, FiniteField, FqPoly, Gf, PolyMatrix, ScalarMatrix};
use proptest::prelude::*;

const ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27];

fn el(f: &FiniteField, v: u32) -> Gf {
    Gf((v % f.order()) as u16)
}

fn poly_of(f: &FiniteField, raw: &[u32]) -> FqPoly {
    FqPoly::new(f, raw.iter().map(|&v| el(f, v)).collect())
}

fn field() -> impl Strategy<Value = FiniteField> {
    (0..ORDERS.len()).prop_map(|i| gf(ORDERS[i]))
}

fn small_field() -> impl Strategy<Value = FiniteField> {
    prop::sample::select(vec![2u32, 3, 4]).prop_map(gf)
}

proptest! {
    #[test]
    fn field_axioms(f in field(), x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let (a, b, c) = (el(&f, x), el(&f, y), el(&f, z));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Gf::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        match f.inv(a) {
            Some(i) => prop_assert_eq!(f.mul(a, i), Gf::ONE),
            None => prop_assert!(a.is_zero()),
        }
        // Frobenius is additive
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn element_text_round_trip(f in field(), x in any::<u32>()) {
        let a = el(&f, x);
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
    }

    #[test]
    fn division_with_remainder(f in field(), a in prop::collection::vec(any::<u32>(), 0..8),
                               b in prop::collection::vec(any::<u32>(), 1..5)) {
        let (a, b) = (poly_of(&f, &a), poly_of(&f, &b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_and_is_monic(f in field(), a in prop::collection::vec(any::<u32>(), 1..6),
                                b in prop::collection::vec(any::<u32>(), 1..6),
                                c in prop::collection::vec(any::<u32>(), 1..4)) {
        let c = poly_of(&f, &c);
        let (a, b) = (poly_of(&f, &a).mul(&c), poly_of(&f, &b).mul(&c));
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = poly_gcd(&a, &b).unwrap();
        prop_assert_eq!(g.leading(), Some(Gf::ONE));
        prop_assert!(g.divides(&a) && g.divides(&b));
        if !c.is_zero() && !a.is_zero() && !b.is_zero() {
            prop_assert!(g.degree() >= c.degree());
        }
    }

    #[test]
    fn weight_is_subadditive(f in field(), a in prop::collection::vec(any::<u32>(), 0..8),
                             b in prop::collection::vec(any::<u32>(), 0..8), s in any::<u32>()) {
        let (a, b) = (poly_of(&f, &a), poly_of(&f, &b));
        prop_assert!(a.add(&b).weight() <= a.weight() + b.weight());
        let s = el(&f, s);
        if !s.is_zero() {
            prop_assert_eq!(a.scale(s).weight(), a.weight());
        }
        prop_assert_eq!(a.shift(3).weight(), a.weight());
        prop_assert_eq!(weight(&[a.clone(), b.clone()]), a.weight() + b.weight());
    }

    #[test]
    fn evaluation_is_a_ring_map(f in field(), a in prop::collection::vec(any::<u32>(), 0..6),
                                b in prop::collection::vec(any::<u32>(), 0..6), x in any::<u32>()) {
        let (a, b, x) = (poly_of(&f, &a), poly_of(&f, &b), el(&f, x));
        prop_assert_eq!(a.mul(&b).eval(x), f.mul(a.eval(x), b.eval(x)));
        prop_assert_eq!(a.add(&b).eval(x), f.add(a.eval(x), b.eval(x)));
    }

    #[test]
    fn decompose_then_evaluate(f in field(), raw in prop::collection::vec(any::<u32>(), 12), x in any::<u32>()) {
        let rows: Vec<Vec<FqPoly>> = raw.chunks(4).map(|c| vec![poly_of(&f, &c[..2]), poly_of(&f, &c[2..])]).collect();
        let g = PolyMatrix::from_rows(&f, rows).unwrap();
        let x = el(&f, x);
        let mut acc = ScalarMatrix::zeros(&f, 3, 2);
        for (i, b) in g.decompose().iter().enumerate() {
            let p = f.pow(x, i as u64);
            for r in 0..3 {
                for c in 0..2 {
                    acc.set(r, c, f.add(acc.get(r, c), f.mul(p, b.get(r, c))));
                }
            }
        }
        prop_assert_eq!(acc, g.eval_at(x));
    }

    #[test]
    fn cofactor_equals_bareiss(f in small_field(), k in 1usize..5, raw in prop::collection::vec(any::<u32>(), 48)) {
        let entries: Vec<FqPoly> = raw.chunks(3).take(k * k).map(|c| poly_of(&f, c)).collect();
        prop_assert_eq!(det_bareiss(&entries, k), det_cofactor(&entries, k));
    }

    #[test]
    fn scalar_rank_facts(f in field(), raw in prop::collection::vec(any::<u32>(), 12)) {
        let rows: Vec<Vec<Gf>> = raw.chunks(4).map(|c| c.iter().map(|&v| el(&f, v)).collect()).collect();
        let m = ScalarMatrix::from_rows(&f, &rows).unwrap();
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let kernel = m.left_kernel();
        prop_assert_eq!(kernel.len() + m.rank(), 3);
        for v in kernel {
            prop_assert!(m.left_mul(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn canonical_form_keeps_the_module(f in small_field(), raw in prop::collection::vec(any::<u32>(), 18)) {
        let rows: Vec<Vec<FqPoly>> = raw.chunks(9).map(|r| r.chunks(3).map(|c| poly_of(&f, c)).collect()).collect();
        let g = PolyMatrix::from_rows(&f, rows).unwrap();
        prop_assume!(g.rank_over_fz() == 2);
        if let Ok(c) = to_canonical(&g) {
            prop_assert_eq!(c.leading_row_coefficients().rank(), 2);
            // unimodular row operations scale every maximal minor by one constant
            let (m0, m1) = (g.maximal_minors().unwrap(), c.maximal_minors().unwrap());
            let i = m0.iter().position(|p| !p.is_zero()).unwrap();
            let u = f.div(m1[i].leading().unwrap(), m0[i].leading().unwrap()).unwrap();
            for (a, b) in m0.iter().zip(&m1) {
                prop_assert_eq!(&a.scale(u), b);
            }
            let degs: Vec<usize> = (0..2).map(|r| c.row_degree(r).unwrap()).collect();
            prop_assert!(degs[0] <= degs[1]);
            prop_assert_eq!(parse_code_file(&format_code_file(&c)).unwrap(), c);
        }
    }
}

fn random_code(f: &FiniteField, raw: &[u32], n: usize, deg: usize) -> Option<ConvCode> {
    let row: Vec<FqPoly> = raw.chunks(deg + 1).take(n).map(|c| poly_of(f, c)).collect();
    ConvCode::new(&PolyMatrix::from_rows(f, vec![row]).ok()?).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_distances_do_not_increase(f in small_field(), raw in prop::collection::vec(any::<u32>(), 9)) {
        let Some(c) = random_code(&f, &raw, 3, 2) else { return Ok(()) };
        let rd = row_distances(&c, 6, &DistanceConfig::default()).unwrap();
        prop_assert!(rd.windows(2).all(|w| w[0] >= w[1]), "{:?}", rd);
        prop_assert!(*rd.last().unwrap() <= c.singleton_bound());
    }

    #[test]
    fn free_distance_ignores_scaling(f in small_field(), raw in prop::collection::vec(any::<u32>(), 9), s in any::<u32>()) {
        let Some(c) = random_code(&f, &raw, 3, 2) else { return Ok(()) };
        let s = el(&f, s);
        prop_assume!(!s.is_zero());
        let scaled: Vec<FqPoly> = c.generator().row(0).iter().map(|p| p.scale(s)).collect();
        let d = ConvCode::new(&PolyMatrix::from_rows(&f, vec![scaled]).unwrap()).unwrap();
        let cfg = DistanceConfig::default();
        prop_assert_eq!(free_distance(&c, &cfg).unwrap().dfree, free_distance(&d, &cfg).unwrap().dfree);
    }

    #[test]
    fn lifting_keeps_free_distance(f in small_field(), raw in prop::collection::vec(any::<u32>(), 6)) {
        let Some(c) = random_code(&f, &raw, 3, 1) else { return Ok(()) };
        let big = FiniteField::with_default(f.characteristic(), f.degree() * 2).unwrap();
        let l = c.lift(&FieldEmbedding::new(&f, &big).unwrap()).unwrap();
        let cfg = DistanceConfig::default();
        prop_assert_eq!(free_distance(&c, &cfg).unwrap().dfree, free_distance(&l, &cfg).unwrap().dfree);
    }

    #[test]
    fn sliding_matrix_shape(f in small_field(), raw in prop::collection::vec(any::<u32>(), 9), l in 0usize..5) {
        let Some(c) = random_code(&f, &raw, 3, 2) else { return Ok(()) };
        let s = sliding_matrix(&c, l).body;
        prop_assert_eq!((s.rows(), s.cols()), (l + 1, 3 * (c.delta() + l + 1)));
        prop_assert_eq!(s.rank(), l + 1);
    }
}
