//! Fundamental alcove, Kac coordinates and finite-order automorphisms.
//!
//! Points are rational vectors in the invariant-lattice coordinates of
//! [`FoldedDatum`]. Kac tuples are `(s_0, s_1, ..., s_k)`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::folding::{DiagramAutomorphism, FoldedDatum};
use crate::lattice::{
    common_denominator, dot, dot_q, integral_vec, invert_rational, serialize_qvec, to_q_rows, IVec,
    LatticeMap, QVec, Q,
};
use crate::root_data::{Isogeny, RootDatum};

const WALK_CAP: usize = 1_000_000;

pub fn check_divides(r: u32, m: u64) -> Result<()> {
    if m == 0 || !m.is_multiple_of(u64::from(r)) {
        return Err(Error::IncompatibleOrder { r, m });
    }
    Ok(())
}

/// One of the walls `<x, beta_i> >= 0` or `<x, theta0> <= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wall {
    /// 0 for the affine wall, `i` for `beta_i`.
    pub node: usize,
    pub functional: IVec,
    /// `>=` bound for simple walls, `<=` bound for the affine wall.
    pub bound: i64,
    pub upper: bool,
}

impl Wall {
    pub fn holds(&self, x: &[Q]) -> bool {
        let v = dot_q(&self.functional, x);
        if self.upper {
            v <= Q::from_integer(self.bound)
        } else {
            v >= Q::from_integer(self.bound)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Alcove {
    pub walls: Vec<Wall>,
}

impl Alcove {
    pub fn contains(&self, x: &[Q]) -> bool {
        self.walls.iter().all(|w| w.holds(x))
    }
}

pub fn fundamental_alcove(fd: &FoldedDatum) -> Alcove {
    let mut walls: Vec<Wall> = fd
        .folded_simple_roots()
        .iter()
        .enumerate()
        .map(|(i, b)| Wall {
            node: i + 1,
            functional: b.clone(),
            bound: 0,
            upper: false,
        })
        .collect();
    walls.push(Wall {
        node: 0,
        functional: fd.theta0().to_vec(),
        bound: 1,
        upper: true,
    });
    Alcove { walls }
}

/// Folding data plus the dual basis to the folded simple roots.
#[derive(Debug, Clone)]
pub struct AlcoveContext {
    da: DiagramAutomorphism,
    fd: FoldedDatum,
    /// `coweights[j]` pairs to `delta_ij` with `beta_i`.
    coweights: Vec<QVec>,
}

impl AlcoveContext {
    pub fn new(da: &DiagramAutomorphism) -> Result<Self> {
        let fd = da.folded_datum()?;
        let inv = invert_rational(&to_q_rows(fd.folded_simple_roots()))
            .ok_or_else(|| Error::Internal("folded roots are dependent".into()))?;
        let k = fd.rank();
        let coweights = (0..k)
            .map(|j| (0..k).map(|i| inv[i][j]).collect())
            .collect();
        Ok(AlcoveContext {
            da: da.clone(),
            fd,
            coweights,
        })
    }

    pub fn automorphism(&self) -> &DiagramAutomorphism {
        &self.da
    }

    pub fn folded(&self) -> &FoldedDatum {
        &self.fd
    }

    pub fn r(&self) -> u32 {
        self.da.order()
    }

    pub fn coweights(&self) -> &[QVec] {
        &self.coweights
    }

    fn level(&self, m: u64) -> Result<i64> {
        check_divides(self.r(), m)?;
        i64::try_from(m / u64::from(self.r())).map_err(|_| Error::Overflow("alcove level"))
    }

    /// `sum_j p_j coweight_j`.
    fn point_with_pairings(&self, p: &[i64]) -> QVec {
        let k = self.fd.rank();
        (0..k)
            .map(|i| {
                p.iter()
                    .zip(&self.coweights)
                    .fold(Q::from_integer(0), |acc, (&c, w)| acc + w[i] * c)
            })
            .collect()
    }

    /// Kac tuples `(s_0, ..., s_k)`, descending lexicographic order.
    pub fn kac_coordinates(&self, m: u64) -> Result<Vec<KacCoordinates>> {
        let level = self.level(m)?;
        let labels = self.fd.kac_labels();
        let mut out = Vec::new();
        let mut cur = vec![0i64; labels.len()];
        fill(labels, 0, level, &mut cur, &mut out);
        Ok(out.into_iter().map(|s| KacCoordinates { s }).collect())
    }

    /// Points of the alcove in `(r/m) X^tau`, in Kac-tuple order.
    pub fn alcove_points(&self, m: u64) -> Result<Vec<AlcovePoint>> {
        let level = self.level(m)?;
        let scale = Q::new(1, level);
        let mut out = Vec::new();
        for kac in self.kac_coordinates(m)? {
            let v = self.point_with_pairings(&kac.s[1..]);
            if let Some(v) = integral_vec(&v) {
                let point = v.iter().map(|&c| scale * c).collect();
                out.push(AlcovePoint {
                    point,
                    lattice_vector: v,
                });
            }
        }
        Ok(out)
    }

    pub fn alcove_to_kac(&self, m: u64, x: &[Q]) -> Result<KacCoordinates> {
        let level = self.level(m)?;
        let alcove = fundamental_alcove(&self.fd);
        if !alcove.contains(x) {
            return Err(Error::InvalidInput(
                "point is not in the fundamental alcove".into(),
            ));
        }
        let mut s = vec![0i64];
        for b in self.fd.folded_simple_roots() {
            let v = dot_q(b, x) * level;
            if !v.is_integer() {
                return Err(Error::NotInLattice(format!(
                    "point is not in (r/m) times the coweight lattice (pairing {v})"
                )));
            }
            s.push(v.to_integer());
        }
        let used: i64 = s[1..]
            .iter()
            .zip(&self.fd.kac_labels()[1..])
            .map(|(a, b)| a * b)
            .sum();
        s[0] = level - used;
        Ok(KacCoordinates { s })
    }

    pub fn kac_to_alcove(&self, m: u64, kac: &KacCoordinates) -> Result<AlcovePoint> {
        let level = self.level(m)?;
        let labels = self.fd.kac_labels();
        if kac.s.len() != labels.len()
            || kac.s.iter().any(|&x| x < 0)
            || kac.s.iter().zip(labels).map(|(a, b)| a * b).sum::<i64>() != level
        {
            return Err(Error::InvalidInput(format!(
                "{:?} is not a Kac tuple of level {level}",
                kac.s
            )));
        }
        let v = self.point_with_pairings(&kac.s[1..]);
        let v = integral_vec(&v).ok_or_else(|| {
            Error::NotInLattice(format!("Kac tuple {:?} lies outside the lattice", kac.s))
        })?;
        let point = v.iter().map(|&c| Q::new(c, level)).collect();
        Ok(AlcovePoint {
            point,
            lattice_vector: v,
        })
    }

    /// Orbit representatives of Kac tuples under the affine diagram symmetries.
    /// The representative is the first member of its orbit in enumeration order.
    pub fn kac_classes(&self, m: u64) -> Result<Vec<KacClass>> {
        if self.da.base().isogeny() != Isogeny::Adjoint {
            return Err(Error::NotAdjoint);
        }
        self.kac_classes_unchecked(m)
    }

    fn kac_classes_unchecked(&self, m: u64) -> Result<Vec<KacClass>> {
        let all = self.kac_coordinates(m)?;
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut out = Vec::new();
        for kac in all {
            if seen.contains(&kac.s) {
                continue;
            }
            let orbit: HashSet<Vec<i64>> = self
                .fd
                .affine_symmetries()
                .iter()
                .map(|p| permute_tuple(&kac.s, p))
                .collect();
            let size = orbit.len();
            seen.extend(orbit);
            out.push(KacClass {
                representative: kac,
                orbit_size: size,
            });
        }
        Ok(out)
    }

    /// Walks `x` into the alcove, returning the point and the element of
    /// `M ⋊ W^tau` used.
    pub fn reduce(&self, x: &[Q]) -> Result<Reduction> {
        let k = self.fd.rank();
        if x.len() != k {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, expected {k}",
                x.len()
            )));
        }
        let gens = self.fd.folded_weyl_generators();
        let theta0 = self.fd.theta0();
        let theta_check = self.fd.theta0_check();
        let s_theta = LatticeMap::from_rows(
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| i64::from(i == j) - theta_check[i] * theta0[j])
                        .collect()
                })
                .collect(),
        );
        let mut point = x.to_vec();
        let mut w = LatticeMap::identity(k);
        let mut mu = vec![0i64; k];
        let one = Q::from_integer(1);
        for step in 0..WALK_CAP {
            let neg = self
                .fd
                .folded_simple_roots()
                .iter()
                .position(|b| dot_q(b, &point) < Q::from_integer(0));
            if let Some(i) = neg {
                point = gens[i].apply_q(&point);
                w = gens[i].compose(&w);
                mu = gens[i].apply(&mu);
                continue;
            }
            if dot_q(theta0, &point) > one {
                point = s_theta.apply_q(&point);
                for (p, c) in point.iter_mut().zip(theta_check) {
                    *p += *c;
                }
                w = s_theta.compose(&w);
                mu = s_theta.apply(&mu);
                for (a, c) in mu.iter_mut().zip(theta_check) {
                    *a += c;
                }
                continue;
            }
            return Ok(Reduction {
                point,
                weyl: w,
                translation: mu,
                steps: step,
            });
        }
        Err(Error::Internal("alcove walk did not terminate".into()))
    }

    pub fn in_translation_lattice(&self, v: &[i64]) -> bool {
        let basis = self.fd.translation_lattice();
        match crate::lattice::BasisSolver::new(basis.to_vec()) {
            Ok(s) => s.coordinates(v).is_ok(),
            Err(_) => v.iter().all(|&x| x == 0),
        }
    }
}

fn fill(labels: &[i64], i: usize, remaining: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if i + 1 == labels.len() {
        if remaining % labels[i] == 0 {
            cur[i] = remaining / labels[i];
            out.push(cur.clone());
        }
        return;
    }
    let mut s = remaining / labels[i];
    loop {
        cur[i] = s;
        fill(labels, i + 1, remaining - s * labels[i], cur, out);
        if s == 0 {
            break;
        }
        s -= 1;
    }
}

/// `out[p[i]] = s[i]`.
pub fn permute_tuple(s: &[i64], p: &[usize]) -> Vec<i64> {
    let mut out = vec![0; s.len()];
    for (i, &x) in s.iter().enumerate() {
        out[p[i]] = x;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KacCoordinates {
    pub s: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KacClass {
    pub representative: KacCoordinates,
    pub orbit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlcovePoint {
    #[serde(serialize_with = "serialize_qvec")]
    pub point: QVec,
    /// `v` with `point = (r/m) v`.
    pub lattice_vector: IVec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    #[serde(serialize_with = "serialize_qvec")]
    pub point: QVec,
    /// `point = weyl(x) + translation`.
    pub weyl: LatticeMap,
    pub translation: IVec,
    pub steps: usize,
}

pub fn enumerate_alcove_points(da: &DiagramAutomorphism, m: u64) -> Result<Vec<AlcovePoint>> {
    AlcoveContext::new(da)?.alcove_points(m)
}

pub fn enumerate_kac_coordinates(da: &DiagramAutomorphism, m: u64) -> Result<Vec<KacCoordinates>> {
    AlcoveContext::new(da)?.kac_coordinates(m)
}

pub fn kac_classes(da: &DiagramAutomorphism, m: u64) -> Result<Vec<KacClass>> {
    AlcoveContext::new(da)?.kac_classes(m)
}

pub fn reduce_to_alcove(da: &DiagramAutomorphism, x: &[Q]) -> Result<Reduction> {
    AlcoveContext::new(da)?.reduce(x)
}

/// `sigma = tau ∘ Ad(t)` with `t = zeta_m^lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutomorphismDescriptor {
    #[serde(rename = "type")]
    pub label: String,
    pub isogeny: Isogeny,
    pub tau_order: u32,
    pub m: u64,
    /// Invariant-lattice coordinates.
    pub lambda: IVec,
    pub lambda_ambient: IVec,
    #[serde(serialize_with = "serialize_qvec")]
    pub alcove_point: QVec,
    pub kac: Option<KacCoordinates>,
}

impl AutomorphismDescriptor {
    pub fn sigma(&self) -> String {
        if self.lambda.iter().all(|&x| x == 0) {
            "tau".to_string()
        } else {
            format!("tau ∘ Ad(zeta_{}^{:?})", self.m, self.lambda)
        }
    }
}

fn descriptor(
    ctx: &AlcoveContext,
    m: u64,
    point: QVec,
    kac: Option<KacCoordinates>,
) -> Result<AutomorphismDescriptor> {
    let mq = Q::from_integer(i64::try_from(m).map_err(|_| Error::Overflow("order"))?);
    let lambda = integral_vec(&point.iter().map(|x| *x * mq).collect::<Vec<_>>())
        .ok_or_else(|| Error::NotInLattice("alcove point times m is not integral".into()))?;
    Ok(AutomorphismDescriptor {
        label: ctx.da.label(),
        isogeny: ctx.da.base().isogeny(),
        tau_order: ctx.r(),
        m,
        lambda_ambient: ctx.fd.to_ambient(&lambda),
        lambda,
        alcove_point: point,
        kac,
    })
}

/// One descriptor per class of order-`m` automorphisms in the outer class of
/// `tau`, computed on the adjoint lattice.
pub fn classify_automorphisms(
    da: &DiagramAutomorphism,
    m: u64,
) -> Result<Vec<AutomorphismDescriptor>> {
    let base = da.base();
    let adjoint = RootDatum::new(base.simple_type(), Isogeny::Adjoint);
    let ad = DiagramAutomorphism::new(adjoint, da.order())?;
    let ctx = AlcoveContext::new(&ad)?;
    ctx.kac_classes(m)?
        .into_iter()
        .map(|c| {
            let p = ctx.kac_to_alcove(m, &c.representative)?;
            descriptor(&ctx, m, p.point, Some(c.representative))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParahoricDescriptor {
    pub m_min: u64,
    /// `m_min * theta` before reduction.
    pub lambda_raw: IVec,
    pub reduction: Reduction,
    pub descriptor: AutomorphismDescriptor,
}

pub fn parahoric_descriptor(da: &DiagramAutomorphism, theta: &[Q]) -> Result<ParahoricDescriptor> {
    let ctx = AlcoveContext::new(da)?;
    let m_min = common_denominator(theta);
    let lambda_raw = integral_vec(&theta.iter().map(|x| *x * m_min).collect::<Vec<_>>())
        .expect("common denominator clears fractions");
    let reduction = ctx.reduce(theta)?;
    let m = u64::try_from(m_min).map_err(|_| Error::Overflow("denominator"))?;
    let kac = if m % u64::from(ctx.r()) == 0 && da.base().isogeny() == Isogeny::Adjoint {
        ctx.alcove_to_kac(m, &reduction.point).ok()
    } else {
        None
    };
    let descriptor = descriptor(&ctx, m, reduction.point.clone(), kac)?;
    Ok(ParahoricDescriptor {
        m_min: m,
        lambda_raw,
        reduction,
        descriptor,
    })
}

/// Pairing of an integral invariant vector with each wall, for display.
pub fn wall_values(fd: &FoldedDatum, v: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = fd.folded_simple_roots().iter().map(|b| dot(b, v)).collect();
    out.push(dot(fd.theta0(), v));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::{diagram_automorphism, supported_pairs};
    use crate::root_data::Family;
    use proptest::prelude::*;

    fn ctx(f: Family, n: usize, iso: Isogeny, r: u32) -> AlcoveContext {
        let d = RootDatum::build(f, n, iso).unwrap();
        AlcoveContext::new(&diagram_automorphism(&d, r).unwrap()).unwrap()
    }

    fn q(p: i64, d: i64) -> Q {
        Q::new(p, d)
    }

    #[test]
    fn a1_alcove() {
        let c = ctx(Family::A, 1, Isogeny::SimplyConnected, 1);
        let alc = fundamental_alcove(c.folded());
        assert!(alc.contains(&[q(1, 2)]));
        assert!(alc.contains(&[q(0, 1)]));
        assert!(!alc.contains(&[q(3, 4)]));
        assert!(!alc.contains(&[q(-1, 4)]));
    }

    #[test]
    fn a3_alcove_inequalities() {
        // x = A v1 + B v2 with v1 = coroot_1 + coroot_3, v2 = coroot_2
        let c = ctx(Family::A, 3, Isogeny::SimplyConnected, 2);
        let alc = fundamental_alcove(c.folded());
        let funcs: Vec<&IVec> = alc.walls.iter().map(|w| &w.functional).collect();
        assert_eq!(funcs[0], &vec![2, -1]);
        assert_eq!(funcs[1], &vec![-2, 2]);
        assert_eq!(funcs[2], &vec![0, 1]);
        assert!(alc.walls[2].upper);
    }

    #[test]
    fn zero_always_in_alcove() {
        for (f, n, r) in supported_pairs(8) {
            let c = ctx(f, n, Isogeny::SimplyConnected, r);
            let k = c.folded().rank();
            assert!(fundamental_alcove(c.folded()).contains(&vec![Q::from_integer(0); k]));
        }
    }

    #[test]
    fn a3_point_counts() {
        let c = ctx(Family::A, 3, Isogeny::SimplyConnected, 2);
        assert_eq!(c.alcove_points(4).unwrap().len(), 4);
        assert_eq!(c.alcove_points(6).unwrap().len(), 6);
        assert!(c.alcove_points(3).is_err());
        let at_r = c.alcove_points(2).unwrap();
        assert_eq!(at_r[0].lattice_vector, vec![0, 0]);
    }

    #[test]
    fn reduce_examples() {
        let c = ctx(Family::A, 1, Isogeny::SimplyConnected, 1);
        let red = c.reduce(&[q(1, 1)]).unwrap();
        assert_eq!(red.point, vec![q(0, 1)]);
        let inside = c.reduce(&[q(1, 3)]).unwrap();
        assert_eq!(inside.point, vec![q(1, 3)]);
        assert_eq!(inside.steps, 0);
    }

    #[test]
    fn kac_enumeration_examples() {
        let c = ctx(Family::A, 1, Isogeny::Adjoint, 1);
        let s: Vec<Vec<i64>> = c
            .kac_coordinates(2)
            .unwrap()
            .into_iter()
            .map(|k| k.s)
            .collect();
        assert_eq!(s, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let c3 = ctx(Family::A, 3, Isogeny::Adjoint, 2);
        let s: Vec<Vec<i64>> = c3
            .kac_coordinates(2)
            .unwrap()
            .into_iter()
            .map(|k| k.s)
            .collect();
        assert_eq!(s, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let e8 = ctx(Family::E, 8, Isogeny::Adjoint, 1);
        let s: Vec<Vec<i64>> = e8
            .kac_coordinates(1)
            .unwrap()
            .into_iter()
            .map(|k| k.s)
            .collect();
        assert_eq!(s, vec![vec![1, 0, 0, 0, 0, 0, 0, 0, 0]]);
    }

    #[test]
    fn kac_class_examples() {
        let a1 = ctx(Family::A, 1, Isogeny::Adjoint, 1)
            .kac_classes(2)
            .unwrap();
        assert_eq!(a1.len(), 2);
        assert_eq!(a1[0].representative.s, vec![2, 0]);
        assert_eq!(a1[0].orbit_size, 2);
        assert_eq!(
            ctx(Family::A, 3, Isogeny::Adjoint, 2)
                .kac_classes(2)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            ctx(Family::A, 4, Isogeny::Adjoint, 2)
                .kac_classes(2)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            ctx(Family::A, 3, Isogeny::SimplyConnected, 2)
                .kac_classes(2)
                .unwrap_err(),
            Error::NotAdjoint
        );
    }

    #[test]
    fn kac_roundtrip_adjoint_grid() {
        for (f, n, r) in supported_pairs(6) {
            let c = ctx(f, n, Isogeny::Adjoint, r);
            for mult in 1..=4u64 {
                let m = mult * u64::from(r);
                let kacs = c.kac_coordinates(m).unwrap();
                let points = c.alcove_points(m).unwrap();
                assert_eq!(kacs.len(), points.len(), "{f}{n} r={r} m={m}");
                for kac in &kacs {
                    let p = c.kac_to_alcove(m, kac).unwrap();
                    assert_eq!(&c.alcove_to_kac(m, &p.point).unwrap(), kac);
                }
            }
        }
    }

    #[test]
    fn alcove_to_kac_zero() {
        let c = ctx(Family::B, 3, Isogeny::Adjoint, 1);
        assert_eq!(
            c.alcove_to_kac(5, &[q(0, 1); 3]).unwrap().s,
            vec![5, 0, 0, 0]
        );
    }

    #[test]
    fn classify_examples() {
        let a1 = RootDatum::build(Family::A, 1, Isogeny::SimplyConnected).unwrap();
        let d = classify_automorphisms(&diagram_automorphism(&a1, 1).unwrap(), 2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].lambda, vec![0]);
        assert_eq!(d[0].sigma(), "tau");
        let d4 = RootDatum::build(Family::D, 4, Isogeny::SimplyConnected).unwrap();
        let tri = diagram_automorphism(&d4, 3).unwrap();
        let descs = classify_automorphisms(&tri, 3).unwrap();
        // D4^(3) labels (1; 2, 1): level-1 tuples (1,0,0), (0,0,1)
        assert_eq!(descs.len(), 2);
        assert_eq!(descs[0].lambda, vec![0, 0]);
    }

    #[test]
    fn parahoric_examples() {
        let c = ctx(Family::A, 3, Isogeny::SimplyConnected, 2);
        let da = c.automorphism().clone();
        let zero = parahoric_descriptor(&da, &[q(0, 1), q(0, 1)]).unwrap();
        assert_eq!(zero.m_min, 1);
        assert_eq!(zero.descriptor.sigma(), "tau");
        // invariant basis is (coroot_1 + coroot_3, coroot_2)
        let p = parahoric_descriptor(&da, &[q(0, 1), q(1, 2)]).unwrap();
        assert_eq!(p.m_min, 2);
        assert_eq!(p.lambda_raw, vec![0, 1]);
        assert_eq!(p.descriptor.lambda, vec![1, 1]);
        assert_eq!(common_denominator(&p.reduction.point), 2);
    }

    fn small_point() -> impl Strategy<Value = (usize, Vec<(i64, i64)>)> {
        (0usize..14)
            .prop_flat_map(|case| (Just(case), prop::collection::vec((-12i64..13, 1i64..7), 8)))
    }

    const CASES: [(Family, usize, u32); 14] = [
        (Family::A, 1, 1),
        (Family::A, 3, 2),
        (Family::A, 4, 2),
        (Family::A, 5, 2),
        (Family::B, 3, 1),
        (Family::C, 3, 1),
        (Family::D, 4, 3),
        (Family::D, 5, 2),
        (Family::E, 6, 2),
        (Family::E, 6, 1),
        (Family::F, 4, 1),
        (Family::G, 2, 1),
        (Family::A, 2, 2),
        (Family::D, 4, 1),
    ];

    proptest! {
        #[test]
        fn reduction_is_a_retraction((case, raw) in small_point(), iso_adj in any::<bool>()) {
            let (f, n, r) = CASES[case];
            let iso = if iso_adj { Isogeny::Adjoint } else { Isogeny::SimplyConnected };
            let c = ctx(f, n, iso, r);
            let k = c.folded().rank();
            let x: QVec = raw.iter().take(k).map(|&(p, d)| Q::new(p, d)).collect();
            let red = c.reduce(&x).unwrap();
            let alcove = fundamental_alcove(c.folded());
            prop_assert!(alcove.contains(&red.point));
            // witness
            let mut img = red.weyl.apply_q(&x);
            for (a, b) in img.iter_mut().zip(&red.translation) { *a += *b; }
            prop_assert_eq!(&img, &red.point);
            prop_assert!(c.in_translation_lattice(&red.translation));
            prop_assert_eq!(red.weyl.determinant().abs(), 1);
            // idempotent
            prop_assert_eq!(&c.reduce(&red.point).unwrap().point, &red.point);
            // invariance under generators and translations
            let gens = c.folded().folded_weyl_generators();
            for g in &gens {
                prop_assert_eq!(&c.reduce(&g.apply_q(&x)).unwrap().point, &red.point);
            }
            for t in c.folded().translation_lattice() {
                let shifted: QVec = x.iter().zip(t).map(|(a, b)| *a + *b).collect();
                prop_assert_eq!(&c.reduce(&shifted).unwrap().point, &red.point);
            }
            // denominators survive reduction
            prop_assert_eq!(common_denominator(&red.point), common_denominator(&x));
        }
    }

    #[test]
    fn kac_classes_stable_under_relabeling() {
        let c = ctx(Family::D, 5, Isogeny::Adjoint, 1);
        let classes = c.kac_classes(4).unwrap();
        let reps: HashSet<Vec<i64>> = classes.iter().map(|k| k.representative.s.clone()).collect();
        for kac in c.kac_coordinates(4).unwrap() {
            let orbit: HashSet<Vec<i64>> = c
                .folded()
                .affine_symmetries()
                .iter()
                .map(|p| permute_tuple(&kac.s, p))
                .collect();
            assert_eq!(orbit.iter().filter(|o| reps.contains(*o)).count(), 1);
        }
        let total: usize = classes.iter().map(|k| k.orbit_size).sum();
        assert_eq!(total, c.kac_coordinates(4).unwrap().len());
    }
}
