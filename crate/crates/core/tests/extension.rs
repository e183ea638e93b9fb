mod common;

use common::*;
use convgoppa::cgc::{build, CgcSpec};
use convgoppa::distance::{block_distance, free_distance, DistanceConfig};
use convgoppa::extend::{check_extension, eligible_points, extended_spec, f_sliding};
use convgoppa::{Error, Gf};

fn seven(lambda: [u32; 3]) -> CgcSpec {
    let f = gf(8);
    let l = lambda.iter().map(|&e| if e == 0 { Gf::ONE } else { f.pow_gen(e as u64) }).collect();
    CgcSpec::new(&f, seven_points(), l).unwrap()
}

/// Every certified point of a few MDS bases: the extension is MDS, the weight
/// bound holds for three consecutive band sizes, and the stage bound grows by
/// at most one.
#[test]
fn certified_extensions_are_mds() {
    let cfg = DistanceConfig::default();
    let mut checked = 0;
    for spec in [seven([0, 0, 0]), seven([2, 2, 2]), seven([0, 3, 5])] {
        let base = free_distance(&build(&spec).unwrap(), &cfg).unwrap();
        if !base.is_mds {
            continue;
        }
        let e = eligible_points(&spec, &cfg).unwrap();
        for p in e.points {
            let r = check_extension(&spec, p, &cfg).unwrap();
            assert!(r.certified_mds);
            let ext = free_distance(&r.extended, &cfg).unwrap();
            assert!(ext.is_mds, "{p:?}");
            if r.conditions_certified {
                assert!(r.extended_mu_ge_3 && r.extended_l_within_one, "{p:?}");
            }
            for k in r.k0..=r.k0 + 2 {
                let fk = f_sliding(spec.field(), r.f, k);
                if fk.rank() == k + 1 {
                    let d = block_distance(&fk, cfg.cap).unwrap();
                    assert!(ext.dfree >= base.dfree + d, "{p:?} k={k}");
                }
            }
            checked += 1;
        }
    }
    assert!(checked >= 35, "{checked}");
}

#[test]
fn uncertified_points_are_reported_not_rejected() {
    let cfg = DistanceConfig::default();
    let spec = seven([0, 0, 0]);
    let f = spec.field().clone();
    // b = 0 is outside the certified set but still gets a full report
    let r = check_extension(&spec, (Gf::ONE, Gf::ZERO), &cfg).unwrap();
    assert!(!r.certified_mds);
    assert_eq!(r.h.len(), r.base_l + 3);
    assert!(matches!(check_extension(&spec, spec.points()[0], &cfg), Err(Error::DegeneratePoint(_))));
    let ext = extended_spec(&spec, (f.pow_gen(3), f.pow_gen(5))).unwrap();
    assert_eq!(ext.n(), 8);
}

#[test]
fn base_must_be_mds() {
    let f = gf(8);
    let a = f.pow_gen(1);
    // l1 = 0 lies on the non-MDS locus of the seven-point family
    let spec = CgcSpec::new(&f, seven_points(), vec![Gf::ONE, Gf::ZERO, Gf::ONE]).unwrap();
    assert!(matches!(
        check_extension(&spec, (a, Gf::ONE), &DistanceConfig::default()),
        Err(Error::BaseNotMds)
    ));
}
