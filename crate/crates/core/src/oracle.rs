//! Brute-force cohomology of the finite torus `T_m = X / mX`.
//!
//! Works additively in ambient cocharacter coordinates and uses nothing but
//! the root datum and the node permutation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::folding::DiagramAutomorphism;
use crate::lattice::{IVec, LatticeMap};
use crate::normal_form::enum_cap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleTorus {
    pub cocycles: usize,
    pub coboundaries: usize,
    pub classes: usize,
    /// Smallest element of each class, by encoded index.
    pub representatives: Vec<IVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub torus: OracleTorus,
    pub group_classes: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

struct Torsion {
    m: i64,
    n: usize,
}

impl Torsion {
    fn size(&self) -> usize {
        (self.m as usize).pow(self.n as u32)
    }

    fn encode(&self, v: &[i64]) -> usize {
        v.iter().rev().fold(0usize, |acc, &x| {
            acc * self.m as usize + x.rem_euclid(self.m) as usize
        })
    }

    fn decode(&self, mut idx: usize) -> IVec {
        (0..self.n)
            .map(|_| {
                let d = (idx % self.m as usize) as i64;
                idx /= self.m as usize;
                d
            })
            .collect()
    }

    fn apply(&self, a: &LatticeMap, idx: usize) -> usize {
        self.encode(&a.apply(&self.decode(idx)))
    }

    fn add(&self, a: usize, b: &[i64]) -> usize {
        let v: IVec = self.decode(a).iter().zip(b).map(|(x, y)| x + y).collect();
        self.encode(&v)
    }
}

fn check(da: &DiagramAutomorphism, m: u64) -> Result<Torsion> {
    let r = da.order();
    if m == 0 || !m.is_multiple_of(u64::from(r)) {
        return Err(Error::IncompatibleOrder { r, m });
    }
    let n = da.base().rank();
    let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let cap = enum_cap();
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    Ok(Torsion { m: m as i64, n })
}

/// Longest element of the parabolic subgroup of each node orbit.
fn invariant_weyl_generators(da: &DiagramAutomorphism) -> Vec<LatticeMap> {
    let base = da.base();
    let n = base.rank();
    let s = base.weyl_generators();
    let perm = da.permutation();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if done[i] {
            continue;
        }
        let mut orbit = vec![i];
        done[i] = true;
        let mut j = perm[i];
        while j != i {
            done[j] = true;
            orbit.push(j);
            j = perm[j];
        }
        let adjacent_pair = orbit.len() == 2 && base.cartan()[orbit[0]][orbit[1]] != 0;
        let w = if adjacent_pair {
            s[orbit[0]].compose(&s[orbit[1]]).compose(&s[orbit[0]])
        } else {
            orbit
                .iter()
                .fold(LatticeMap::identity(n), |acc, &j| acc.compose(&s[j]))
        };
        out.push(w);
    }
    out
}

struct Cocycles {
    t: Torsion,
    is_cocycle: Vec<bool>,
    count: usize,
    coboundary_gens: Vec<IVec>,
    coboundaries: usize,
}

fn cocycles(da: &DiagramAutomorphism, m: u64) -> Result<Cocycles> {
    let t = check(da, m)?;
    let n = t.n;
    let size = t.size();
    let norm = da.norm_operator(m);
    let mut is_cocycle = vec![false; size];
    let mut count = 0;
    for (idx, flag) in is_cocycle.iter_mut().enumerate() {
        let v = norm.apply(&t.decode(idx));
        if v.iter().all(|x| x.rem_euclid(t.m) == 0) {
            *flag = true;
            count += 1;
        }
    }
    let one_minus = LatticeMap::identity(n).sub(da.lattice_action());
    let coboundary_gens: Vec<IVec> = (0..n).map(|j| one_minus.column(j)).collect();
    // subgroup generated by the coboundary generators
    let mut in_b = vec![false; size];
    in_b[0] = true;
    let mut stack = vec![0usize];
    let mut coboundaries = 1;
    while let Some(x) = stack.pop() {
        for g in &coboundary_gens {
            let y = t.add(x, g);
            if !in_b[y] {
                in_b[y] = true;
                coboundaries += 1;
                stack.push(y);
            }
        }
    }
    Ok(Cocycles {
        t,
        is_cocycle,
        count,
        coboundary_gens,
        coboundaries,
    })
}

fn count_classes(c: &Cocycles, extra: &[LatticeMap]) -> (usize, Vec<IVec>) {
    let size = c.t.size();
    let mut uf = UnionFind::new(size);
    for idx in 0..size {
        if !c.is_cocycle[idx] {
            continue;
        }
        for g in &c.coboundary_gens {
            uf.union(idx, c.t.add(idx, g));
        }
        for w in extra {
            uf.union(idx, c.t.apply(w, idx));
        }
    }
    let mut reps = Vec::new();
    for idx in 0..size {
        if c.is_cocycle[idx] && uf.find(idx) == idx {
            reps.push(c.t.decode(idx));
        }
    }
    (reps.len(), reps)
}

pub fn brute_force_h1_torus(da: &DiagramAutomorphism, m: u64) -> Result<OracleTorus> {
    let c = cocycles(da, m)?;
    let (classes, representatives) = count_classes(&c, &[]);
    if c.coboundaries * classes != c.count {
        return Err(Error::Internal(
            "coboundary count does not divide cocycle count".into(),
        ));
    }
    Ok(OracleTorus {
        cocycles: c.count,
        coboundaries: c.coboundaries,
        classes,
        representatives,
    })
}

pub fn brute_force_h1_group(da: &DiagramAutomorphism, m: u64) -> Result<usize> {
    let c = cocycles(da, m)?;
    Ok(count_classes(&c, &invariant_weyl_generators(da)).0)
}

pub fn brute_force(da: &DiagramAutomorphism, m: u64) -> Result<OracleReport> {
    let torus = brute_force_h1_torus(da, m)?;
    let group_classes = brute_force_h1_group(da, m)?;
    Ok(OracleReport {
        torus,
        group_classes,
    })
}
