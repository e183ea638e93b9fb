//! Adding one evaluation point to an MDS code of type `[n, 1, 2]`.
//!
//! The new column is `F(z) = s(a z + b) = F_0 + F_1 z + F_2 z^2`. The
//! extension is certified either by the closed-form conditions (stacked
//! distance at least 3, `a != 0`, `s(b) != 0`, `l_2 != 0` and nonvanishing
//! `h_k`), or directly by the weight bound
//! `dfree(extended) >= dfree(base) + d(F_k0)` reaching the Singleton bound.

use rayon::prelude::*;

use crate::cgc::{build, hasse_eval, CgcSpec};
use crate::code::ConvCode;
use crate::distance::{block_distance, c0_code, free_distance, l_of_c, DistanceConfig};
use crate::error::{Error, Result};
use crate::gf::{FiniteField, Gf};
use crate::polymat::ScalarMatrix;

fn require_degree_two(spec: &CgcSpec) -> Result<()> {
    if spec.delta() != 2 {
        return Err(Error::PreconditionViolated(format!("extension needs degree 2, got {}", spec.delta())));
    }
    Ok(())
}

/// `(F_0, F_1, F_2)` with `F_j = a^j s^{(j)}(b)`.
pub fn eval_new_point(spec: &CgcSpec, (a, b): (Gf, Gf)) -> Result<[Gf; 3]> {
    require_degree_two(spec)?;
    let f = spec.field();
    if a.is_zero() {
        return Err(Error::DegeneratePoint("a = 0".into()));
    }
    if spec.points().contains(&(a, b)) {
        return Err(Error::DegeneratePoint(format!("({},{}) is already a point", f.format(a), f.format(b))));
    }
    let mut out = [Gf::ZERO; 3];
    for (j, o) in out.iter_mut().enumerate() {
        *o = f.mul(f.pow(a, j as u64), hasse_eval(f, spec.lambda(), j, b));
    }
    Ok(out)
}

/// The `(k+1) x (k+3)` band matrix with rows `(.., F_0, F_1, F_2, ..)`.
pub fn f_sliding(field: &FiniteField, fc: [Gf; 3], k: usize) -> ScalarMatrix {
    let mut m = ScalarMatrix::zeros(field, k + 1, k + 3);
    for r in 0..=k {
        for (j, &c) in fc.iter().enumerate() {
            m.set(r, r + j, c);
        }
    }
    m
}

/// `h_0, ..., h_upto`: complete symmetric functions of the roots of `F`.
/// `h_0 = 1`, `h_1 = -F_1/F_2`, `h_{k+1} = -h_k F_1/F_2 - h_{k-1} F_0/F_2`.
pub fn h_sequence(field: &FiniteField, fc: [Gf; 3], upto: usize) -> Result<Vec<Gf>> {
    let [f0, f1, f2] = fc;
    let inv = field.inv(f2).ok_or(Error::F2Zero)?;
    let c1 = field.neg(field.mul(f1, inv));
    let c0 = field.neg(field.mul(f0, inv));
    let mut h = vec![Gf::ONE];
    if upto >= 1 {
        h.push(c1);
    }
    for k in 1..upto {
        h.push(field.add(field.mul(h[k], c1), field.mul(h[k - 1], c0)));
    }
    Ok(h)
}

/// Determinant of the `(k+1) x (k+1)` tridiagonal matrix with `F_1` on the
/// diagonal, `F_2` above and `F_0` below.
pub fn banded_det(field: &FiniteField, fc: [Gf; 3], k: usize) -> Gf {
    let mut m = ScalarMatrix::zeros(field, k + 1, k + 1);
    for r in 0..=k {
        m.set(r, r, fc[1]);
        if r < k {
            m.set(r, r + 1, fc[2]);
            m.set(r + 1, r, fc[0]);
        }
    }
    m.det().expect("square")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub stacked_distance_ge_3: bool,
    pub a_nonzero: bool,
    pub s0_at_b_nonzero: bool,
    pub lambda2_nonzero: bool,
    pub all_h_nonzero: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.stacked_distance_ge_3 && self.a_nonzero && self.s0_at_b_nonzero && self.lambda2_nonzero && self.all_h_nonzero
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub new_point: (Gf, Gf),
    pub f: [Gf; 3],
    /// `h_0 ..= h_{l(C)+2}`; indices `1..=l(C)+2` are tested.
    pub h: Vec<Gf>,
    pub conditions: Conditions,
    pub base_stacked_distance: usize,
    pub base_l: usize,
    pub base_dfree: usize,
    pub extended_stacked_distance: usize,
    pub extended_l: usize,
    pub k0: usize,
    /// `d(F_k0)`, `None` when `F_k0` is rank deficient.
    pub d_f_k0: Option<usize>,
    pub dfree_lower_bound: Option<usize>,
    pub extended_singleton_bound: usize,
    pub conditions_certified: bool,
    pub bound_certified: bool,
    pub certified_mds: bool,
    /// Stacked distance of the extended code is at least 3.
    pub extended_mu_ge_3: bool,
    /// `l(extended) <= l(base) + 1`.
    pub extended_l_within_one: bool,
    pub extended: ConvCode,
}

/// Appends `p` to the points of `spec`.
pub fn extended_spec(spec: &CgcSpec, p: (Gf, Gf)) -> Result<CgcSpec> {
    let mut pts = spec.points().to_vec();
    pts.push(p);
    CgcSpec::new(spec.field(), pts, spec.lambda().to_vec())
}

pub fn check_extension(spec: &CgcSpec, p: (Gf, Gf), cfg: &DistanceConfig) -> Result<ExtensionReport> {
    require_degree_two(spec)?;
    if spec.lambda()[2].is_zero() {
        return Err(Error::HypothesisFailed("lambda2_nonzero"));
    }
    if p.0.is_zero() {
        return Err(Error::HypothesisFailed("a_nonzero"));
    }
    let field = spec.field();
    let fc = eval_new_point(spec, p)?;
    let base = build(spec)?;
    let profile = free_distance(&base, cfg)?;
    if !profile.is_mds {
        return Err(Error::BaseNotMds);
    }
    let (base_mu, base_l) = (profile.mu, profile.l_of_c);
    let extended = build(&extended_spec(spec, p)?)
        .map_err(|e| Error::DegeneratePoint(format!("extended generator: {e}")))?;
    let (_, ext_mu) = c0_code(&extended, cfg)?;
    let ext_l = l_of_c(&extended, ext_mu);
    let k0 = ext_l.max(base_l);
    let fk0 = f_sliding(field, fc, k0);
    let d_f_k0 = if fk0.rank() == k0 + 1 { Some(block_distance(&fk0, cfg.cap)?) } else { None };
    let dfree_lower_bound = d_f_k0.map(|d| profile.dfree + d);
    let bound = extended.singleton_bound();
    let bound_certified = dfree_lower_bound.is_some_and(|lb| lb >= bound);

    let h = h_sequence(field, fc, base_l + 2)?;
    let conditions = Conditions {
        stacked_distance_ge_3: base_mu >= 3,
        a_nonzero: true,
        s0_at_b_nonzero: !fc[0].is_zero(),
        lambda2_nonzero: true,
        all_h_nonzero: h[1..].iter().all(|x| !x.is_zero()),
    };
    let conditions_certified = conditions.all();
    Ok(ExtensionReport {
        new_point: p,
        f: fc,
        h,
        conditions,
        base_stacked_distance: base_mu,
        base_l,
        base_dfree: profile.dfree,
        extended_stacked_distance: ext_mu,
        extended_l: ext_l,
        k0,
        d_f_k0,
        dfree_lower_bound,
        extended_singleton_bound: bound,
        conditions_certified,
        bound_certified,
        certified_mds: conditions_certified || bound_certified,
        extended_mu_ge_3: ext_mu >= 3,
        extended_l_within_one: ext_l <= base_l + 1,
        extended,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eligible {
    pub points: Vec<(Gf, Gf)>,
    /// Why the set is empty without checking candidates.
    pub diagnostic: Option<String>,
}

/// All new points `(a, b)` whose extension is certified MDS.
pub fn eligible_points(spec: &CgcSpec, cfg: &DistanceConfig) -> Result<Eligible> {
    require_degree_two(spec)?;
    let base = build(spec)?;
    let profile = free_distance(&base, cfg)?;
    if !profile.is_mds {
        return Err(Error::BaseNotMds);
    }
    if profile.mu < 3 {
        return Ok(Eligible {
            points: Vec::new(),
            diagnostic: Some(format!("stacked coefficient code has distance {} < 3", profile.mu)),
        });
    }
    let f = spec.field();
    let candidates: Vec<(Gf, Gf)> = f
        .nonzero()
        .iter()
        .flat_map(|&a| f.enumerate().into_iter().map(move |b| (a, b)))
        .filter(|p| !spec.points().contains(p))
        .collect();
    let checked: Vec<Result<Option<(Gf, Gf)>>> = candidates
        .into_par_iter()
        .map(|p| match check_extension(spec, p, cfg) {
            Ok(r) => Ok(r.certified_mds.then_some(p)),
            Err(Error::DegeneratePoint(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect();
    let mut points = Vec::new();
    for c in checked {
        points.extend(c?);
    }
    Ok(Eligible { points, diagnostic: None })
}
