//! Integer matrices acting on lattice coordinates, plus the handful of exact
//! rational helpers the rest of the crate needs.
//!
//! Vectors are column vectors; a [`LatticeMap`] acts by `x -> M x`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number used for alcove points and coweights.
pub type Q = Ratio<i64>;

pub type IVec = Vec<i64>;
pub type QVec = Vec<Q>;

/// Square integer matrix acting on lattice coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeMap {
    rows: Vec<IVec>,
}

impl fmt::Debug for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

impl LatticeMap {
    pub fn from_rows(rows: Vec<IVec>) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "lattice map must be square"
        );
        LatticeMap { rows }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        LatticeMap { rows }
    }

    pub fn zero(n: usize) -> Self {
        LatticeMap {
            rows: vec![vec![0; n]; n],
        }
    }

    /// Matrix sending basis vector `e_j` to `e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n);
        for (j, &pj) in perm.iter().enumerate() {
            m.rows[pj][j] = 1;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[IVec] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> IVec {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn apply(&self, x: &[i64]) -> IVec {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    pub fn apply_q(&self, x: &[Q]) -> QVec {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).fold(Q::zero(), |acc, (&a, b)| acc + *b * a))
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.rows[i][k] * other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        LatticeMap { rows }
    }

    pub fn add(&self, other: &LatticeMap) -> LatticeMap {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        LatticeMap { rows }
    }

    pub fn sub(&self, other: &LatticeMap) -> LatticeMap {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        LatticeMap { rows }
    }

    pub fn scale(&self, k: i64) -> LatticeMap {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * k).collect())
            .collect();
        LatticeMap { rows }
    }

    pub fn pow(&self, e: u32) -> LatticeMap {
        (0..e).fold(Self::identity(self.dim()), |acc, _| acc.compose(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    pub fn transpose(&self) -> LatticeMap {
        let n = self.dim();
        LatticeMap {
            rows: (0..n).map(|j| self.column(j)).collect(),
        }
    }

    /// Exact inverse; errors unless the map is unimodular.
    pub fn inverse(&self) -> Result<LatticeMap> {
        let inv = invert_rational(&to_q_rows(&self.rows))
            .ok_or_else(|| Error::InvalidInput("lattice map is singular".into()))?;
        let rows = inv
            .into_iter()
            .map(|r| integral_vec(&r))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidInput("lattice map is not unimodular".into()))?;
        Ok(LatticeMap { rows })
    }

    pub fn determinant(&self) -> i64 {
        let d = determinant_q(&to_q_rows(&self.rows));
        debug_assert!(d.is_integer());
        d.to_integer()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[i64], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (&x, y)| acc + *y * x)
}

pub fn to_q(v: &[i64]) -> QVec {
    v.iter().map(|&x| Q::from_integer(x)).collect()
}

pub fn to_q_rows(rows: &[IVec]) -> Vec<QVec> {
    rows.iter().map(|r| to_q(r)).collect()
}

pub fn integral_vec(v: &[Q]) -> Option<IVec> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub fn scale_q(v: &[Q], k: Q) -> QVec {
    v.iter().map(|x| *x * k).collect()
}

/// Least common multiple of the reduced denominators (1 for the zero vector).
pub fn common_denominator(v: &[Q]) -> i64 {
    v.iter()
        .fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()))
}

/// Gauss-Jordan inverse over the rationals; `None` when singular.
pub fn invert_rational(a: &[QVec]) -> Option<Vec<QVec>> {
    let n = a.len();
    let mut m: Vec<QVec> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant_q(a: &[QVec]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            let f = m[r][col] / p;
            if !f.is_zero() {
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    det
}

/// Solves `sum_k c_k basis[k] = x` exactly. Returns `None` if `x` is not in
/// the rational span of `basis` (which must be linearly independent).
pub fn solve_in_basis(basis: &[IVec], x: &[Q]) -> Option<QVec> {
    let k = basis.len();
    let n = x.len();
    // Augmented system, one row per ambient coordinate.
    let mut m: Vec<QVec> = (0..n)
        .map(|i| {
            let mut row: QVec = basis.iter().map(|b| Q::from_integer(b[i])).collect();
            row.push(x[i]);
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(k);
    for col in 0..k {
        let piv = (pivot_row..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, piv);
        let p = m[pivot_row][col];
        for v in m[pivot_row].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col];
                let pr = m[pivot_row].clone();
                for (v, w) in m[r].iter_mut().zip(pr) {
                    *v -= f * w;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| m[r][k]).collect())
}

/// Precomputed left inverse for repeated coordinate solves in a fixed basis.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    basis: Vec<IVec>,
    /// Rows of a rational left inverse restricted to independent ambient rows.
    left_inverse: Vec<QVec>,
    pivot_rows: Vec<usize>,
}

impl BasisSolver {
    pub fn new(basis: Vec<IVec>) -> Result<Self> {
        let k = basis.len();
        let n = basis.first().map_or(0, |b| b.len());
        // Greedily pick k ambient rows giving an invertible k x k block.
        let mut chosen: Vec<usize> = Vec::new();
        for i in 0..n {
            if chosen.len() == k {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(i);
            let rows: Vec<QVec> = trial
                .iter()
                .map(|&r| basis.iter().map(|b| Q::from_integer(b[r])).collect())
                .collect();
            if rank_q(&rows) == trial.len() {
                chosen = trial;
            }
        }
        if chosen.len() != k {
            return Err(Error::InvalidInput("basis vectors are dependent".into()));
        }
        let block: Vec<QVec> = chosen
            .iter()
            .map(|&r| basis.iter().map(|b| Q::from_integer(b[r])).collect())
            .collect();
        let left_inverse =
            invert_rational(&block).ok_or_else(|| Error::Internal("singular block".into()))?;
        Ok(BasisSolver {
            basis,
            left_inverse,
            pivot_rows: chosen,
        })
    }

    pub fn basis(&self) -> &[IVec] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Rational coordinates of `x`; `None` when `x` is outside the span.
    pub fn coordinates_q(&self, x: &[Q]) -> Option<QVec> {
        let rhs: QVec = self.pivot_rows.iter().map(|&r| x[r]).collect();
        let c: QVec = self
            .left_inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&rhs)
                    .fold(Q::zero(), |a, (p, q)| a + *p * *q)
            })
            .collect();
        let n = x.len();
        for i in 0..n {
            let recon = self
                .basis
                .iter()
                .zip(&c)
                .fold(Q::zero(), |a, (b, ci)| a + *ci * b[i]);
            if recon != x[i] {
                return None;
            }
        }
        Some(c)
    }

    /// Integer coordinates of `x`; errors when `x` is not in the lattice.
    pub fn coordinates(&self, x: &[i64]) -> Result<IVec> {
        let c = self
            .coordinates_q(&to_q(x))
            .ok_or_else(|| Error::NotInLattice(format!("{x:?} outside span")))?;
        integral_vec(&c).ok_or_else(|| Error::NotInLattice(format!("{x:?}")))
    }

    pub fn combine(&self, coords: &[i64]) -> IVec {
        let n = self.basis.first().map_or(0, |b| b.len());
        let mut out = vec![0; n];
        for (b, &c) in self.basis.iter().zip(coords) {
            for (o, &x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    pub fn combine_q(&self, coords: &[Q]) -> QVec {
        let n = self.basis.first().map_or(0, |b| b.len());
        let mut out = vec![Q::zero(); n];
        for (b, c) in self.basis.iter().zip(coords) {
            for (o, &x) in out.iter_mut().zip(b) {
                *o += *c * x;
            }
        }
        out
    }
}

pub fn rank_q(rows: &[QVec]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let p = m[rank][col];
        for r in rank + 1..m.len() {
            let f = m[r][col] / p;
            if !f.is_zero() {
                let pr = m[rank].clone();
                for (v, w) in m[r].iter_mut().zip(pr) {
                    *v -= f * w;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

pub fn parse_q_vec(s: &str) -> Result<QVec> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_q).collect()
}

pub fn fmt_q_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

pub fn is_nonnegative(x: &Q) -> bool {
    !x.is_negative()
}

/// Serializes a rational vector as `"p/q"` strings.
pub fn serialize_qvec<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_q))
}

pub fn serialize_opt_qvec<S: serde::Serializer>(
    v: &Option<QVec>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_qvec(v, s),
        None => s.serialize_none(),
    }
}
