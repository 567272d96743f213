//! Root data of simple groups in fixed Bourbaki numbering.
//!
//! Cocharacter coordinates: for the simply connected form the basis is the
//! simple coroots, for the adjoint form it is the fundamental coweights.
//! `cartan[i][j] = <coroot_i, root_j>`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{invert_rational, to_q_rows, IVec, LatticeMap, QVec, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(Error::InvalidInput(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    family: Family,
    rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let reason = match family {
            Family::A if rank < 1 => Some("type A needs rank >= 1"),
            Family::B | Family::C if rank < 2 => Some("types B and C need rank >= 2"),
            Family::D if rank < 3 => Some("type D needs rank >= 3"),
            Family::E if !(6..=8).contains(&rank) => Some("type E needs rank 6, 7 or 8"),
            Family::F if rank != 4 => Some("type F needs rank 4"),
            Family::G if rank != 2 => Some("type G needs rank 2"),
            _ => None,
        };
        match reason {
            Some(reason) => Err(Error::InvalidRank {
                family,
                rank,
                reason,
            }),
            None => Ok(SimpleType { family, rank }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Bourbaki Cartan matrix, `cartan[i][j] = <coroot_i, root_j>`.
    pub fn cartan_matrix(&self) -> Vec<IVec> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..n - 1 {
                    link(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..n - 1 {
                    link(i, i + 1);
                }
            }
            Family::F => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            Family::G => link(0, 1),
        }
        match self.family {
            // alpha_n short
            Family::B => c[n - 1][n - 2] = -2,
            // alpha_n long
            Family::C => c[n - 2][n - 1] = -2,
            // alpha_1, alpha_2 long; alpha_3, alpha_4 short
            Family::F => c[2][1] = -2,
            // alpha_1 short, alpha_2 long
            Family::G => c[0][1] = -3,
            _ => {}
        }
        c
    }

    /// Order of the Weyl group from the closed-form product.
    pub fn weyl_group_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Isogeny {
    #[serde(rename = "sc")]
    SimplyConnected,
    #[serde(rename = "adjoint")]
    Adjoint,
}

impl fmt::Display for Isogeny {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Isogeny::SimplyConnected => "sc",
            Isogeny::Adjoint => "adjoint",
        })
    }
}

impl FromStr for Isogeny {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sc" | "simply_connected" | "simply-connected" => Ok(Isogeny::SimplyConnected),
            "adjoint" | "ad" => Ok(Isogeny::Adjoint),
            other => Err(Error::InvalidInput(format!("unknown isogeny '{other}'"))),
        }
    }
}

/// Positive roots and root lengths of a Cartan matrix, in simple-root
/// coordinates. Shared by the root datum and the folded datum.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: Vec<IVec>,
    /// `(alpha_i, alpha_i) / 2`, normalised so the shortest simple root has 1.
    symmetrizer: IVec,
    positive: Vec<IVec>,
}

const ROOT_CLOSURE_CAP: usize = 100_000;

impl RootSystem {
    pub fn from_cartan(cartan: Vec<IVec>) -> Result<Self> {
        let symmetrizer = symmetrizer(&cartan)?;
        let n = cartan.len();
        let mut seen: HashSet<IVec> = HashSet::new();
        let mut queue: VecDeque<IVec> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        let mut steps = 0usize;
        while let Some(beta) = queue.pop_front() {
            steps += 1;
            if steps > ROOT_CLOSURE_CAP {
                return Err(Error::Internal(
                    "root system closure did not terminate".into(),
                ));
            }
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[i][j]).sum();
                let mut img = beta.clone();
                img[i] -= pairing;
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        let mut positive: Vec<IVec> = seen
            .into_iter()
            .filter(|r| r.iter().all(|&c| c >= 0))
            .collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        Ok(RootSystem {
            cartan,
            symmetrizer,
            positive,
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[IVec] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[IVec] {
        &self.positive
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    /// `(beta, beta) / 2` in the symmetrizer's normalisation.
    pub fn half_norm(&self, beta: &[i64]) -> Q {
        let n = self.rank();
        let mut s = 0i64;
        for i in 0..n {
            for j in 0..n {
                s += beta[i] * beta[j] * self.symmetrizer[i] * self.cartan[i][j];
            }
        }
        Q::new(s, 2)
    }

    fn highest_among(&self, pred: impl Fn(&IVec) -> bool) -> IVec {
        self.positive
            .iter()
            .filter(|r| pred(r))
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
            .expect("root system has positive roots")
    }

    pub fn highest_root(&self) -> IVec {
        self.highest_among(|_| true)
    }

    pub fn highest_short_root(&self) -> IVec {
        let shortest = self
            .positive
            .iter()
            .map(|r| self.half_norm(r))
            .min()
            .expect("nonempty");
        self.highest_among(|r| self.half_norm(r) == shortest)
    }

    /// Coroot of `beta`, in simple-coroot coordinates.
    pub fn coroot(&self, beta: &[i64]) -> QVec {
        let nb = self.half_norm(beta);
        beta.iter()
            .zip(&self.symmetrizer)
            .map(|(&b, &d)| Q::from_integer(b * d) / nb)
            .collect()
    }
}

fn symmetrizer(cartan: &[IVec]) -> Result<IVec> {
    let n = cartan.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(Q::from_integer(1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                // d_i c_ij = d_j c_ji
                d[j] = Some(d[i].unwrap() * Q::new(cartan[i][j], cartan[j][i]));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Q> = d
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Internal("Cartan matrix is not connected".into()))?;
    let min = *d.iter().min().unwrap();
    let scaled: Vec<Q> = d.iter().map(|x| *x / min).collect();
    let l = scaled
        .iter()
        .fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
    Ok(scaled.iter().map(|x| (*x * l).to_integer()).collect())
}

/// A root, stored by its simple-root coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    pub coefficients: IVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    simple_type: SimpleType,
    isogeny: Isogeny,
    cartan: Vec<IVec>,
    basis_labels: Vec<String>,
    simple_coroots: Vec<IVec>,
    simple_roots: Vec<IVec>,
    fundamental_coweights: Vec<QVec>,
}

/// Canonical JSON shape for `--dump-datum`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatumDump {
    #[serde(rename = "type")]
    pub family: Family,
    pub rank: usize,
    pub isogeny: Isogeny,
    pub cartan: Vec<IVec>,
}

impl RootDatum {
    pub fn new(simple_type: SimpleType, isogeny: Isogeny) -> Self {
        let n = simple_type.rank();
        let cartan = simple_type.cartan_matrix();
        let unit = |i: usize| -> IVec { (0..n).map(|j| i64::from(i == j)).collect() };
        let (basis_labels, simple_coroots, simple_roots, fundamental_coweights) = match isogeny {
            Isogeny::SimplyConnected => {
                let inv = invert_rational(&to_q_rows(&cartan)).expect("Cartan matrix invertible");
                (
                    (1..=n).map(|i| format!("coroot_{i}")).collect(),
                    (0..n).map(unit).collect(),
                    (0..n)
                        .map(|j| (0..n).map(|i| cartan[i][j]).collect())
                        .collect(),
                    inv,
                )
            }
            Isogeny::Adjoint => (
                (1..=n).map(|i| format!("coweight_{i}")).collect(),
                cartan.clone(),
                (0..n).map(unit).collect(),
                (0..n)
                    .map(|i| unit(i).into_iter().map(Q::from_integer).collect())
                    .collect(),
            ),
        };
        RootDatum {
            simple_type,
            isogeny,
            cartan,
            basis_labels,
            simple_coroots,
            simple_roots,
            fundamental_coweights,
        }
    }

    pub fn build(family: Family, rank: usize, isogeny: Isogeny) -> Result<Self> {
        Ok(Self::new(SimpleType::new(family, rank)?, isogeny))
    }

    pub fn simple_type(&self) -> SimpleType {
        self.simple_type
    }

    pub fn isogeny(&self) -> Isogeny {
        self.isogeny
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[IVec] {
        &self.cartan
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn simple_coroots(&self) -> &[IVec] {
        &self.simple_coroots
    }

    /// Simple roots as functionals on cocharacter coordinates.
    pub fn simple_roots(&self) -> &[IVec] {
        &self.simple_roots
    }

    pub fn fundamental_coweights(&self) -> &[QVec] {
        &self.fundamental_coweights
    }

    pub fn pairing(&self, cocharacter: &[i64], root_functional: &[i64]) -> i64 {
        crate::lattice::dot(cocharacter, root_functional)
    }

    /// Simple reflections `s_i(x) = x - <x, alpha_i> coroot_i`.
    pub fn weyl_generators(&self) -> Vec<LatticeMap> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                let cr = &self.simple_coroots[i];
                let rt = &self.simple_roots[i];
                LatticeMap::from_rows(
                    (0..n)
                        .map(|a| (0..n).map(|b| i64::from(a == b) - cr[a] * rt[b]).collect())
                        .collect(),
                )
            })
            .collect()
    }

    pub fn root_system(&self) -> RootSystem {
        RootSystem::from_cartan(self.cartan.clone()).expect("valid Cartan matrix")
    }

    pub fn highest_root(&self) -> Root {
        Root {
            coefficients: self.root_system().highest_root(),
        }
    }

    pub fn highest_short_root(&self) -> Root {
        Root {
            coefficients: self.root_system().highest_short_root(),
        }
    }

    /// A root as a functional on cocharacter coordinates.
    pub fn root_functional(&self, root: &Root) -> IVec {
        let n = self.rank();
        (0..n)
            .map(|k| {
                root.coefficients
                    .iter()
                    .zip(&self.simple_roots)
                    .map(|(c, r)| c * r[k])
                    .sum()
            })
            .collect()
    }

    /// Index of the coroot lattice in the cocharacter lattice.
    pub fn coroot_index(&self) -> i64 {
        LatticeMap::from_rows(self.simple_coroots.clone())
            .determinant()
            .abs()
    }

    pub fn dump(&self) -> RootDatumDump {
        RootDatumDump {
            family: self.simple_type.family(),
            rank: self.rank(),
            isogeny: self.isogeny,
            cartan: self.cartan.clone(),
        }
    }
}

/// Breadth-first closure of the group generated by `gens`.
pub fn group_closure(gens: &[LatticeMap], cap: usize) -> Result<Vec<LatticeMap>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let id = LatticeMap::identity(first.dim());
    let mut seen: HashSet<LatticeMap> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.compose(s);
            if seen.insert(h.clone()) {
                if out.len() >= cap {
                    return Err(Error::TooLarge {
                        size: out.len() as u128 + 1,
                        cap: cap as u128,
                    });
                }
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(out)
}
