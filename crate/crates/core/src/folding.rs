//! Diagram automorphisms, invariant lattices and the folded datum.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{to_q, BasisSolver, IVec, LatticeMap, QVec, Q};
use crate::normal_form::{hermite_normal_form, integer_kernel};
use crate::root_data::{group_closure, Family, RootDatum, RootSystem, SimpleType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    base: RootDatum,
    permutation: Vec<usize>,
    order: u32,
    lattice_action: LatticeMap,
}

/// Canonical order-`r` diagram automorphism (0-based node permutation).
pub fn diagram_automorphism(d: &RootDatum, r: u32) -> Result<DiagramAutomorphism> {
    DiagramAutomorphism::new(d.clone(), r)
}

impl DiagramAutomorphism {
    pub fn new(base: RootDatum, r: u32) -> Result<Self> {
        let t = base.simple_type();
        let n = t.rank();
        let unsupported = || Error::UnsupportedAutomorphism {
            label: t.to_string(),
            order: r,
        };
        let mut perm: Vec<usize> = (0..n).collect();
        match (t.family(), r) {
            (_, 1) => {}
            (Family::A, 2) if n >= 2 => perm.reverse(),
            (Family::D, 2) => perm.swap(n - 2, n - 1),
            (Family::E, 2) if n == 6 => {
                perm.swap(0, 5);
                perm.swap(2, 4);
            }
            (Family::D, 3) if n == 4 => {
                perm[0] = 2;
                perm[2] = 3;
                perm[3] = 0;
            }
            _ => return Err(unsupported()),
        }
        let lattice_action = LatticeMap::permutation(&perm);
        Ok(DiagramAutomorphism {
            base,
            permutation: perm,
            order: r,
            lattice_action,
        })
    }

    pub fn base(&self) -> &RootDatum {
        &self.base
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn lattice_action(&self) -> &LatticeMap {
        &self.lattice_action
    }

    /// Twisted affine label such as `A3^(2)`; untwisted types print as `A3`.
    pub fn label(&self) -> String {
        if self.order == 1 {
            self.base.simple_type().to_string()
        } else {
            format!("{}^({})", self.base.simple_type(), self.order)
        }
    }

    /// Node orbits, each sorted, ordered by their minimal node.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.permutation.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![i];
            seen[i] = true;
            let mut j = self.permutation[i];
            while j != i {
                seen[j] = true;
                orbit.push(j);
                j = self.permutation[j];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Basis of the fixed sublattice, from the saturated kernel of `tau - 1`.
    pub fn invariant_sublattice(&self) -> Vec<IVec> {
        let n = self.base.rank();
        let m = self.lattice_action.sub(&LatticeMap::identity(n));
        let kernel = integer_kernel(m.rows(), n).expect("small kernel");
        hermite_normal_form(&kernel).expect("small normal form")
    }

    /// `1 + tau + ... + tau^(m-1)`.
    pub fn norm_operator(&self, m: u64) -> LatticeMap {
        let n = self.base.rank();
        let mut acc = LatticeMap::zero(n);
        let mut power = LatticeMap::identity(n);
        for _ in 0..m {
            acc = acc.add(&power);
            power = power.compose(&self.lattice_action);
        }
        acc
    }

    /// `N_tau = N_{tau, r}`.
    pub fn norm(&self) -> LatticeMap {
        self.norm_operator(u64::from(self.order))
    }

    /// `Av_tau = N_tau / r` as rational rows.
    pub fn averaging(&self) -> Vec<QVec> {
        let r = i64::from(self.order);
        self.norm()
            .rows()
            .iter()
            .map(|row| row.iter().map(|&x| Q::new(x, r)).collect())
            .collect()
    }

    pub fn folded_datum(&self) -> Result<FoldedDatum> {
        FoldedDatum::new(self)
    }
}

/// Data of the folded system in coordinates of the invariant lattice basis.
/// Folded nodes are indexed by node orbits in [`DiagramAutomorphism::orbits`] order.
#[derive(Debug, Clone)]
pub struct FoldedDatum {
    fixed_type: SimpleType,
    /// Our node `k` is Bourbaki node `bourbaki_order[k]` of `fixed_type`.
    bourbaki_order: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    invariant_basis: Vec<IVec>,
    folded_simple_roots: Vec<IVec>,
    folded_simple_coroots: Vec<IVec>,
    cartan: Vec<IVec>,
    theta0: IVec,
    theta0_check: IVec,
    translation_lattice: Vec<IVec>,
    kac_labels: Vec<i64>,
    affine_symmetries: Vec<Vec<usize>>,
    /// `theta0` as folded root coefficients.
    theta0_coefficients: IVec,
}

fn kac_labels_table(base: SimpleType, r: u32) -> Vec<i64> {
    let n = base.rank();
    let mut a = vec![1i64];
    match (base.family(), r) {
        (Family::A, 1) => a.extend(std::iter::repeat_n(1, n)),
        (Family::B, 1) => {
            a.push(1);
            a.extend(std::iter::repeat_n(2, n - 1));
        }
        (Family::C, 1) => {
            a.extend(std::iter::repeat_n(2, n - 1));
            a.push(1);
        }
        (Family::D, 1) => {
            a.push(1);
            a.extend(std::iter::repeat_n(2, n - 3));
            a.extend([1, 1]);
        }
        (Family::E, 1) => a.extend(match n {
            6 => vec![1, 2, 2, 3, 2, 1],
            7 => vec![2, 2, 3, 4, 3, 2, 1],
            _ => vec![2, 3, 4, 6, 5, 4, 3, 2],
        }),
        (Family::F, 1) => a.extend([2, 3, 4, 2]),
        (Family::G, 1) => a.extend([3, 2]),
        (Family::A, 2) if n % 2 == 1 => {
            let l = n.div_ceil(2);
            a.push(1);
            a.extend(std::iter::repeat_n(2, l - 2));
            a.push(1);
        }
        (Family::A, 2) => a.extend(std::iter::repeat_n(2, n / 2)),
        (Family::D, 2) => a.extend(std::iter::repeat_n(1, n - 1)),
        (Family::E, 2) => a.extend([2, 1, 3, 2]),
        (Family::D, 3) => a.extend([2, 1]),
        _ => unreachable!("automorphism validated at construction"),
    }
    a
}

/// Generators of the affine diagram symmetry group, as permutations of `0..=k`.
fn affine_symmetry_generators(base: SimpleType, r: u32, k: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..=k).collect();
    let swap01 = || {
        let mut p = id.clone();
        p.swap(0, 1);
        p
    };
    let reversal = || (0..=k).map(|i| k - i).collect::<Vec<_>>();
    match (base.family(), r) {
        (Family::A, 1) => vec![(0..=k).map(|i| (i + 1) % (k + 1)).collect()],
        (Family::B, 1) => vec![swap01()],
        (Family::C, 1) => vec![reversal()],
        (Family::D, 1) => {
            let mut a = swap01();
            a.swap(k - 1, k);
            let b = if k.is_multiple_of(2) {
                reversal()
            } else {
                let mut p = reversal();
                p[0] = k;
                p[k] = 1;
                p[1] = k - 1;
                p[k - 1] = 0;
                p
            };
            vec![a, b]
        }
        (Family::E, 1) if k == 6 => {
            let mut p = id.clone();
            p[0] = 1;
            p[1] = 6;
            p[6] = 0;
            p[2] = 3;
            p[3] = 5;
            p[5] = 2;
            vec![p]
        }
        (Family::E, 1) if k == 7 => {
            let mut p = id.clone();
            p.swap(0, 7);
            p.swap(1, 6);
            p.swap(3, 5);
            vec![p]
        }
        (Family::A, 2) if base.rank() % 2 == 1 => vec![swap01()],
        (Family::D, 2) => vec![reversal()],
        _ => vec![],
    }
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn permutation_group(gens: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = compose_perm(s, &g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

fn fixed_type(base: SimpleType, r: u32) -> Result<(SimpleType, Vec<usize>)> {
    let n = base.rank();
    let (family, rank) = match (base.family(), r) {
        (f, 1) => (f, n),
        (Family::A, 2) if n == 2 => (Family::A, 1),
        (Family::A, 2) if n % 2 == 1 => (Family::C, n.div_ceil(2)),
        (Family::A, 2) => (Family::B, n / 2),
        (Family::D, 2) => (Family::B, n - 1),
        (Family::E, 2) => (Family::F, 4),
        (Family::D, 3) => (Family::G, 2),
        _ => return Err(Error::Internal("no folding rule".into())),
    };
    let order = if family == Family::F && r == 2 {
        vec![3, 0, 2, 1]
    } else {
        (0..rank).collect()
    };
    Ok((SimpleType::new(family, rank)?, order))
}

impl FoldedDatum {
    fn new(da: &DiagramAutomorphism) -> Result<Self> {
        let base = da.base();
        let n = base.rank();
        let orbits = da.orbits();
        let k = orbits.len();
        let invariant_basis = da.invariant_sublattice();
        let solver = BasisSolver::new(invariant_basis.clone())?;

        // beta_O restricted to the invariant lattice.
        let folded_simple_roots: Vec<IVec> = orbits
            .iter()
            .map(|o| {
                let root = &base.simple_roots()[o[0]];
                invariant_basis
                    .iter()
                    .map(|v| crate::lattice::dot(v, root))
                    .collect()
            })
            .collect();
        let folded_simple_coroots: Vec<IVec> = orbits
            .iter()
            .map(|o| {
                let mut v = vec![0i64; n];
                for &j in o {
                    for (x, c) in v.iter_mut().zip(&base.simple_coroots()[j]) {
                        *x += c;
                    }
                }
                let adjacent = o.len() == 2 && base.cartan()[o[0]][o[1]] != 0;
                if adjacent {
                    v.iter_mut().for_each(|x| *x *= 2);
                }
                solver.coordinates(&v)
            })
            .collect::<Result<_>>()?;
        let cartan: Vec<IVec> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        crate::lattice::dot(&folded_simple_coroots[a], &folded_simple_roots[b])
                    })
                    .collect()
            })
            .collect();

        let (fixed_type, bourbaki_order) = fixed_type(base.simple_type(), da.order())?;
        let reference = fixed_type.cartan_matrix();
        for a in 0..k {
            for b in 0..k {
                if cartan[a][b] != reference[bourbaki_order[a]][bourbaki_order[b]] {
                    return Err(Error::Internal(format!(
                        "folded Cartan matrix of {} does not match {}",
                        da.label(),
                        fixed_type
                    )));
                }
            }
        }

        let rs = RootSystem::from_cartan(cartan.clone())?;
        let doubled =
            base.simple_type().family() == Family::A && n.is_multiple_of(2) && da.order() == 2;
        let psi = if da.order() == 1 {
            rs.highest_root()
        } else {
            rs.highest_short_root()
        };
        let psi_check = rs.coroot(&psi);
        let (theta0_coefficients, theta0_check_coeffs): (IVec, QVec) = if doubled {
            (
                psi.iter().map(|c| 2 * c).collect(),
                psi_check.iter().map(|c| *c / 2).collect(),
            )
        } else {
            (psi.clone(), psi_check)
        };
        let theta0 = combine(&folded_simple_roots, &theta0_coefficients, k);
        let theta0_check_q: QVec = (0..k)
            .map(|i| {
                folded_simple_coroots
                    .iter()
                    .zip(&theta0_check_coeffs)
                    .fold(Q::from_integer(0), |acc, (v, c)| acc + *c * v[i])
            })
            .collect();
        let theta0_check = crate::lattice::integral_vec(&theta0_check_q)
            .ok_or_else(|| Error::Internal("theta0 coroot is not integral".into()))?;

        let kac_labels = kac_labels_table(base.simple_type(), da.order());
        if kac_labels[1..] != theta0_coefficients[..] {
            return Err(Error::Internal(format!(
                "Kac labels {:?} disagree with theta0 {:?} for {}",
                kac_labels,
                theta0_coefficients,
                da.label()
            )));
        }
        let gens = affine_symmetry_generators(base.simple_type(), da.order(), k);
        let affine_symmetries = permutation_group(&gens, k + 1);

        let mut fd = FoldedDatum {
            fixed_type,
            bourbaki_order,
            orbits,
            invariant_basis,
            folded_simple_roots,
            folded_simple_coroots,
            cartan,
            theta0,
            theta0_check,
            translation_lattice: Vec::new(),
            kac_labels,
            affine_symmetries,
            theta0_coefficients,
        };
        let orbit = fd.weyl_orbit(&fd.theta0_check)?;
        fd.translation_lattice = hermite_normal_form(&orbit)?;
        Ok(fd)
    }

    pub fn fixed_type(&self) -> SimpleType {
        self.fixed_type
    }

    pub fn bourbaki_order(&self) -> &[usize] {
        &self.bourbaki_order
    }

    pub fn rank(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Basis of the invariant lattice, in ambient cocharacter coordinates.
    pub fn invariant_basis(&self) -> &[IVec] {
        &self.invariant_basis
    }

    /// Folded simple roots as functionals on invariant coordinates.
    pub fn folded_simple_roots(&self) -> &[IVec] {
        &self.folded_simple_roots
    }

    pub fn folded_simple_coroots(&self) -> &[IVec] {
        &self.folded_simple_coroots
    }

    pub fn cartan(&self) -> &[IVec] {
        &self.cartan
    }

    pub fn theta0(&self) -> &[i64] {
        &self.theta0
    }

    pub fn theta0_coefficients(&self) -> &[i64] {
        &self.theta0_coefficients
    }

    pub fn theta0_check(&self) -> &[i64] {
        &self.theta0_check
    }

    pub fn theta0_check_q(&self) -> QVec {
        to_q(&self.theta0_check)
    }

    /// Hermite basis of the translation lattice, in invariant coordinates.
    pub fn translation_lattice(&self) -> &[IVec] {
        &self.translation_lattice
    }

    pub fn kac_labels(&self) -> &[i64] {
        &self.kac_labels
    }

    /// All affine diagram symmetries, as permutations of `0..=rank`.
    pub fn affine_symmetries(&self) -> &[Vec<usize>] {
        &self.affine_symmetries
    }

    /// Folded reflections `s(x) = x - <x, beta> beta_check` on invariant coordinates.
    pub fn folded_weyl_generators(&self) -> Vec<LatticeMap> {
        let k = self.rank();
        self.folded_simple_roots
            .iter()
            .zip(&self.folded_simple_coroots)
            .map(|(b, bc)| {
                LatticeMap::from_rows(
                    (0..k)
                        .map(|i| (0..k).map(|j| i64::from(i == j) - bc[i] * b[j]).collect())
                        .collect(),
                )
            })
            .collect()
    }

    /// Ambient coordinates of an invariant-coordinate vector.
    pub fn to_ambient(&self, coords: &[i64]) -> IVec {
        combine(
            &self.invariant_basis,
            coords,
            self.invariant_basis.first().map_or(0, |v| v.len()),
        )
    }

    pub fn to_ambient_q(&self, coords: &[Q]) -> QVec {
        let n = self.invariant_basis.first().map_or(0, |v| v.len());
        (0..n)
            .map(|i| {
                self.invariant_basis
                    .iter()
                    .zip(coords)
                    .fold(Q::from_integer(0), |acc, (v, c)| acc + *c * v[i])
            })
            .collect()
    }

    pub fn solver(&self) -> BasisSolver {
        BasisSolver::new(self.invariant_basis.clone()).expect("independent basis")
    }

    /// Affine Cartan matrix with node 0 first.
    pub fn affine_cartan(&self) -> Vec<IVec> {
        let k = self.rank();
        let d = crate::lattice::dot;
        let mut a = vec![vec![0i64; k + 1]; k + 1];
        a[0][0] = d(&self.theta0_check, &self.theta0);
        for j in 0..k {
            a[0][j + 1] = -d(&self.theta0_check, &self.folded_simple_roots[j]);
            a[j + 1][0] = -d(&self.folded_simple_coroots[j], &self.theta0);
            for i in 0..k {
                a[i + 1][j + 1] = self.cartan[i][j];
            }
        }
        a
    }

    /// Orbit of an integral vector under the folded Weyl group.
    pub fn weyl_orbit(&self, v: &[i64]) -> Result<Vec<IVec>> {
        let gens = self.folded_weyl_generators();
        let mut seen: HashSet<IVec> = HashSet::from([v.to_vec()]);
        let mut out = vec![v.to_vec()];
        let mut queue = VecDeque::from([v.to_vec()]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = g.apply(&x);
                if seen.insert(y.clone()) {
                    if out.len() > 1_000_000 {
                        return Err(Error::Internal("Weyl orbit too large".into()));
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    /// Order of the folded Weyl group, by closure.
    pub fn weyl_group_order(&self) -> Result<usize> {
        Ok(group_closure(&self.folded_weyl_generators(), 10_000_000)?.len())
    }
}

fn combine(basis: &[IVec], coords: &[i64], n: usize) -> IVec {
    let mut out = vec![0; n];
    for (b, &c) in basis.iter().zip(coords) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// All supported `(family, rank, r)` with rank at most `max_rank`.
pub fn supported_pairs(max_rank: usize) -> Vec<(Family, usize, u32)> {
    let mut out = Vec::new();
    for family in [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ] {
        for rank in 1..=max_rank {
            if SimpleType::new(family, rank).is_err() {
                continue;
            }
            for r in 1..=3 {
                let ok = match (family, r) {
                    (_, 1) => true,
                    (Family::A, 2) => rank >= 2,
                    (Family::D, 2) => true,
                    (Family::E, 2) => rank == 6,
                    (Family::D, 3) => rank == 4,
                    _ => false,
                };
                if ok {
                    out.push((family, rank, r));
                }
            }
        }
    }
    out
}
