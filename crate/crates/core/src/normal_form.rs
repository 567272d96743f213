//! Smith and Hermite normal forms over arbitrary-precision integers, integer
//! kernels, and finite abelian quotients of lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{BasisSolver, IVec};

pub const DEFAULT_ENUM_CAP: u128 = 10_000_000;
pub const ENUM_CAP_ENV: &str = "TWISTED_H1_ENUM_CAP";

/// Enumeration cap, overridable through `TWISTED_H1_ENUM_CAP`.
pub fn enum_cap() -> u128 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

type BMat = Vec<Vec<BigInt>>;

fn to_big(rows: &[IVec]) -> BMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn from_big(rows: &BMat) -> Result<Vec<IVec>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("converting normal form")))
                .collect()
        })
        .collect()
}

fn big_identity(n: usize) -> BMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// `u * a * v = diag`, with `u`, `v` unimodular and `u_inv = u^{-1}`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Diagonal entries, length `min(rows, cols)`, each dividing the next; zeros last.
    pub diagonal: Vec<BigInt>,
    pub u: BMat,
    pub u_inv: BMat,
    pub v: BMat,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Smith {
    a: BMat,
    u: BMat,
    u_inv: BMat,
    v: BMat,
}

impl Smith {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        let rj = self.a[j].clone();
        for (x, y) in self.a[i].iter_mut().zip(rj) {
            *x += c * y;
        }
        let uj = self.u[j].clone();
        for (x, y) in self.u[i].iter_mut().zip(uj) {
            *x += c * y;
        }
        for row in self.u_inv.iter_mut() {
            let t = c * &row[i];
            row[j] -= t;
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for row in self.a.iter_mut() {
            let t = c * &row[j];
            row[i] += t;
        }
        for row in self.v.iter_mut() {
            let t = c * &row[j];
            row[i] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -&*x;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.len() {
            for j in t..self.a[i].len() {
                if self.a[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= self.a[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(rows: &[IVec]) -> SmithForm {
    let n = rows.len();
    let k = rows.first().map_or(0, |r| r.len());
    let mut s = Smith {
        a: to_big(rows),
        u: big_identity(n),
        u_inv: big_identity(n),
        v: big_identity(k),
    };
    let steps = n.min(k);
    for t in 0..steps {
        let Some((pi, pj)) = s.min_entry(t) else {
            break;
        };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..n {
                if s.a[i][t].is_zero() {
                    continue;
                }
                let q = s.a[i][t].div_floor(&s.a[t][t]);
                s.add_row(i, t, &-q);
                if !s.a[i][t].is_zero() {
                    s.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..k {
                if s.a[t][j].is_zero() {
                    continue;
                }
                let q = s.a[t][j].div_floor(&s.a[t][t]);
                s.add_col(j, t, &-q);
                if !s.a[t][j].is_zero() {
                    s.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into row t.
            let p = s.a[t][t].clone();
            let offending = (t + 1..n).find(|&i| (t + 1..k).any(|j| !(&s.a[i][j] % &p).is_zero()));
            match offending {
                Some(i) => s.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.a[t][t].is_negative() {
            s.negate_row(t);
        }
    }
    let diagonal = (0..steps).map(|i| s.a[i][i].clone()).collect();
    SmithForm {
        diagonal,
        u: s.u,
        u_inv: s.u_inv,
        v: s.v,
    }
}

/// Basis of `{x in Z^n : M x = 0}`; the result is saturated.
pub fn integer_kernel(rows: &[IVec], n: usize) -> Result<Vec<IVec>> {
    if rows.is_empty() {
        return Ok((0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect());
    }
    let snf = smith_normal_form(rows);
    let r = snf.rank();
    let v = from_big(&snf.v)?;
    Ok((r..n)
        .map(|c| v.iter().map(|row| row[c]).collect())
        .collect())
}

/// Row-style Hermite normal form of the lattice spanned by `gens`: upper
/// echelon, positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(gens: &[IVec]) -> Result<Vec<IVec>> {
    let mut a = to_big(gens);
    let ncols = gens.first().map_or(0, |g| g.len());
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let piv = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].abs());
            let Some(p) = piv else { break };
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pr = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pr) {
                    *x -= &q * y;
                }
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                if !q.is_zero() {
                    let pr = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(pr) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    from_big(&a)
}

/// Saturation of a sublattice: all integer vectors in its rational span.
pub fn saturate(gens: &[IVec], n: usize) -> Result<Vec<IVec>> {
    let perp = integer_kernel(gens, n)?;
    integer_kernel(&perp, n)
}

pub fn same_lattice(a: &[IVec], b: &[IVec]) -> Result<bool> {
    Ok(hermite_normal_form(a)? == hermite_normal_form(b)?)
}

/// A finite quotient `L / S` in invariant-factor form.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteAbelianGroup {
    /// Nontrivial invariant factors `d_1 | d_2 | ...`.
    invariant_factors: Vec<i64>,
    cardinality: u128,
    /// Generators of each cyclic factor, in ambient coordinates.
    lift_basis: Vec<IVec>,
    #[serde(skip)]
    ambient: BasisSolver,
    /// Rows projecting lattice coordinates onto the nontrivial factors.
    #[serde(skip)]
    projection: Vec<IVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuotientElement {
    pub coordinates: Vec<i64>,
    pub representative: IVec,
}

/// `span(ambient_basis) / span(sublattice_generators)`.
pub fn quotient(
    ambient_basis: &[IVec],
    sublattice_generators: &[IVec],
) -> Result<FiniteAbelianGroup> {
    let ambient = BasisSolver::new(ambient_basis.to_vec())?;
    let k = ambient.rank();
    let coords: Vec<IVec> = sublattice_generators
        .iter()
        .map(|g| ambient.coordinates(g))
        .collect::<Result<_>>()?;
    // Columns are generators.
    let m: Vec<IVec> = (0..k)
        .map(|i| coords.iter().map(|c| c[i]).collect())
        .collect();
    if coords.is_empty() {
        if k == 0 {
            return Ok(FiniteAbelianGroup {
                invariant_factors: vec![],
                cardinality: 1,
                lift_basis: vec![],
                ambient,
                projection: vec![],
            });
        }
        return Err(Error::RankDefect);
    }
    let snf = smith_normal_form(&m);
    if snf.rank() < k {
        return Err(Error::RankDefect);
    }
    let u = from_big(&snf.u)?;
    let u_inv = from_big(&snf.u_inv)?;
    let mut invariant_factors = Vec::new();
    let mut lift_basis = Vec::new();
    let mut projection = Vec::new();
    let mut cardinality: u128 = 1;
    for (i, d) in snf.diagonal.iter().enumerate() {
        let d = d.to_i64().ok_or(Error::Overflow("invariant factor"))?;
        if d == 1 {
            continue;
        }
        cardinality = cardinality
            .checked_mul(d as u128)
            .ok_or(Error::Overflow("quotient cardinality"))?;
        invariant_factors.push(d);
        let col: IVec = u_inv.iter().map(|row| row[i]).collect();
        lift_basis.push(ambient.combine(&col));
        projection.push(u[i].clone());
    }
    Ok(FiniteAbelianGroup {
        invariant_factors,
        cardinality,
        lift_basis,
        ambient,
        projection,
    })
}

impl FiniteAbelianGroup {
    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn cardinality(&self) -> u128 {
        self.cardinality
    }

    pub fn lift_basis(&self) -> &[IVec] {
        &self.lift_basis
    }

    pub fn ambient_basis(&self) -> &[IVec] {
        self.ambient.basis()
    }

    /// Quotient coordinates of an ambient lattice vector.
    pub fn class_of(&self, x: &[i64]) -> Result<Vec<i64>> {
        let c = self.ambient.coordinates(x)?;
        Ok(self
            .projection
            .iter()
            .zip(&self.invariant_factors)
            .map(|(row, d)| {
                let s: i128 = row
                    .iter()
                    .zip(&c)
                    .map(|(a, b)| *a as i128 * *b as i128)
                    .sum();
                s.rem_euclid(*d as i128) as i64
            })
            .collect())
    }

    pub fn lift(&self, coords: &[i64]) -> IVec {
        let n = self.ambient.basis().first().map_or(0, |b| b.len());
        let mut out = vec![0; n];
        for (g, &c) in self.lift_basis.iter().zip(coords) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += c * x;
            }
        }
        out
    }

    /// Every element once, coordinates in mixed-radix lexicographic order.
    pub fn enumerate_elements(&self) -> Result<Vec<QuotientElement>> {
        self.enumerate_elements_with_cap(enum_cap())
    }

    pub fn enumerate_elements_with_cap(&self, cap: u128) -> Result<Vec<QuotientElement>> {
        if self.cardinality > cap {
            return Err(Error::TooLarge {
                size: self.cardinality,
                cap,
            });
        }
        let mut out = Vec::with_capacity(self.cardinality as usize);
        let mut coords = vec![0i64; self.invariant_factors.len()];
        loop {
            out.push(QuotientElement {
                coordinates: coords.clone(),
                representative: self.lift(&coords),
            });
            let mut pos = coords.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                coords[pos] += 1;
                if coords[pos] < self.invariant_factors[pos] {
                    break;
                }
                coords[pos] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(n: usize) -> Vec<IVec> {
        (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect()
    }

    #[test]
    fn diagonal_two_two() {
        let g = quotient(&unit(2), &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 2]);
    }

    #[test]
    fn determinant_two() {
        let g = quotient(&unit(2), &[vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(g.invariant_factors(), &[2]);
        assert_eq!(g.class_of(&[1, 0]).unwrap(), vec![1]);
        assert_eq!(g.class_of(&[1, 1]).unwrap(), vec![0]);
    }

    #[test]
    fn trivial_quotient() {
        let g = quotient(&unit(1), &[vec![1]]).unwrap();
        assert!(g.invariant_factors().is_empty());
        assert_eq!(g.cardinality(), 1);
        assert_eq!(g.enumerate_elements().unwrap().len(), 1);
    }

    #[test]
    fn rank_defect() {
        assert_eq!(
            quotient(&unit(2), &[vec![1, 1]]).unwrap_err(),
            Error::RankDefect
        );
    }

    #[test]
    fn enumeration_two_three() {
        let g = quotient(&unit(2), &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(g.invariant_factors(), &[6]);
        let elems = g.enumerate_elements().unwrap();
        assert_eq!(elems.len(), 6);
        let classes: std::collections::HashSet<_> = elems
            .iter()
            .map(|e| g.class_of(&e.representative).unwrap())
            .collect();
        assert_eq!(classes.len(), 6);
    }

    #[test]
    fn cap_enforced() {
        let g = quotient(&unit(1), &[vec![100]]).unwrap();
        assert!(matches!(
            g.enumerate_elements_with_cap(10),
            Err(Error::TooLarge { size: 100, cap: 10 })
        ));
    }

    #[test]
    fn sublattice_of_sublattice() {
        let ambient = vec![vec![1, 0, 1], vec![0, 1, 0]];
        let g = quotient(&ambient, &[vec![2, 0, 2], vec![0, 4, 0]]).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 4]);
        assert!(quotient(&ambient, &[vec![1, 0, 0]]).is_err());
    }

    #[test]
    fn kernel_is_saturated() {
        let k = integer_kernel(&[vec![2, 2, 0]], 3).unwrap();
        assert_eq!(k.len(), 2);
        assert!(same_lattice(&k, &[vec![1, -1, 0], vec![0, 0, 1]]).unwrap());
        let s = saturate(&[vec![2, 0], vec![0, 0]], 2).unwrap();
        assert!(same_lattice(&s, &[vec![1, 0]]).unwrap());
    }

    #[test]
    fn hnf_canonical() {
        let a = hermite_normal_form(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(a, vec![vec![1, 0], vec![0, 1]]);
        let b = hermite_normal_form(&[vec![4, 2], vec![2, 0], vec![0, 0]]).unwrap();
        assert_eq!(b, vec![vec![2, 0], vec![0, 2]]);
    }

    fn det_i128(m: &[IVec]) -> i128 {
        let q = crate::lattice::determinant_q(&crate::lattice::to_q_rows(m));
        q.to_integer() as i128
    }

    proptest! {
        #[test]
        fn smith_reconstructs(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 3)) {
            let snf = smith_normal_form(&rows);
            let a = to_big(&rows);
            let n = 3;
            // u * a * v == diag
            let mut ua = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n { for j in 0..n { for t in 0..n { ua[i][j] += &snf.u[i][t] * &a[t][j]; } } }
            for i in 0..n {
                for j in 0..n {
                    let mut x = BigInt::zero();
                    for t in 0..n { x += &ua[i][t] * &snf.v[t][j]; }
                    let expect = if i == j { snf.diagonal[i].clone() } else { BigInt::zero() };
                    prop_assert_eq!(x, expect);
                }
            }
            for w in snf.diagonal.windows(2) {
                if !w[1].is_zero() { prop_assert!((&w[1] % &w[0]).is_zero()); }
            }
            // u_inv really inverts u
            for i in 0..n { for j in 0..n {
                let mut x = BigInt::zero();
                for t in 0..n { x += &snf.u[i][t] * &snf.u_inv[t][j]; }
                prop_assert_eq!(x, if i == j { BigInt::one() } else { BigInt::zero() });
            } }
        }

        #[test]
        fn order_matches_determinant(rows in prop::collection::vec(prop::collection::vec(-5i64..6, 3), 3)) {
            let d = det_i128(&rows);
            prop_assume!(d != 0);
            let g = quotient(&unit(3), &rows).unwrap();
            prop_assert_eq!(g.cardinality() as i128, d.abs());
        }

        #[test]
        fn generator_changes_are_invisible(
            rows in prop::collection::vec(prop::collection::vec(-5i64..6, 3), 3),
            c in -3i64..4,
        ) {
            prop_assume!(det_i128(&rows) != 0);
            let g = quotient(&unit(3), &rows).unwrap();
            let mut moved = rows.clone();
            moved.swap(0, 2);
            for k in 0..3 { moved[1][k] += c * moved[0][k]; }
            let h = quotient(&unit(3), &moved).unwrap();
            prop_assert_eq!(g.invariant_factors(), h.invariant_factors());
            // permute ambient coordinates
            let perm: Vec<IVec> = rows.iter().map(|r| vec![r[2], r[0], r[1]]).collect();
            let p = quotient(&unit(3), &perm).unwrap();
            prop_assert_eq!(g.invariant_factors(), p.invariant_factors());
        }
    }
}
