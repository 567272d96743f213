//! Ramification data, local types and component counts for bundles on a
//! curve with a cyclic group action.

use serde::{Deserialize, Serialize};

use crate::cohomology::{h1_group, CohomologySet, Method};
use crate::error::{Error, Result};
use crate::folding::{diagram_automorphism, DiagramAutomorphism};
use crate::root_data::{Family, Isogeny, RootDatum};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedOrbit {
    pub m: u64,
    #[serde(rename = "type")]
    pub family: Family,
    pub rank: usize,
    pub tau_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringData {
    pub genus: u64,
    pub orbits: Vec<RamifiedOrbit>,
}

impl CoveringData {
    pub fn from_json(s: &str) -> Result<Self> {
        let cd: CoveringData = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("covering data: {e}")))?;
        cd.validate()?;
        Ok(cd)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, o) in self.orbits.iter().enumerate() {
            if o.m < 2 {
                return Err(Error::InvalidInput(format!(
                    "orbit {i}: stabilizer order must be at least 2, got {}",
                    o.m
                )));
            }
            if o.m % u64::from(o.tau_order.max(1)) != 0 {
                return Err(Error::IncompatibleOrder {
                    r: o.tau_order,
                    m: o.m,
                });
            }
        }
        Ok(())
    }

    pub fn automorphism(&self, i: usize, isogeny: Isogeny) -> Result<DiagramAutomorphism> {
        let o = &self.orbits[i];
        diagram_automorphism(&RootDatum::build(o.family, o.rank, isogeny)?, o.tau_order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringVerdict {
    pub exists: bool,
    pub reason: String,
    /// The statement assumes characteristic zero.
    pub assumes_characteristic_zero: bool,
}

/// Whether a Galois covering of a genus `g` curve with the given
/// ramification indices exists.
pub fn covering_exists(genus: u64, indices: &[u64]) -> Result<CoveringVerdict> {
    if let Some(bad) = indices.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidInput(format!(
            "ramification indices must be at least 2, got {bad}"
        )));
    }
    let (exists, reason) = match (genus, indices) {
        (0, [_]) => (false, "g=0, s=1".to_string()),
        (0, [a, b]) if a != b => (false, "g=0, s=2 and m_1 != m_2".to_string()),
        _ => (true, "no exceptional case applies".to_string()),
    };
    Ok(CoveringVerdict {
        exists,
        reason,
        assumes_characteristic_zero: true,
    })
}

/// `H^1(Gamma_x, G)` for every ramified orbit.
pub fn local_type_sets(cd: &CoveringData, isogeny: Isogeny) -> Result<Vec<CohomologySet>> {
    cd.validate()?;
    (0..cd.orbits.len())
        .map(|i| h1_group(&cd.automorphism(i, isogeny)?, cd.orbits[i].m, Method::Auto))
        .collect()
}

pub fn component_count(cd: &CoveringData, isogeny: Isogeny) -> Result<u128> {
    if isogeny != Isogeny::SimplyConnected {
        return Err(Error::NotSimplyConnected);
    }
    let sets = local_type_sets(cd, isogeny)?;
    sets.iter().try_fold(1u128, |acc, s| {
        acc.checked_mul(s.cardinality as u128)
            .ok_or(Error::Overflow("component count"))
    })
}

/// Canonical label of the component with the given local types.
pub fn bundle_label(sets: &[CohomologySet], assignment: &[usize]) -> Result<String> {
    if assignment.len() != sets.len() {
        return Err(Error::InvalidAssignment(format!(
            "{} choices for {} ramified orbits",
            assignment.len(),
            sets.len()
        )));
    }
    if sets.is_empty() {
        return Ok("unramified".to_string());
    }
    let parts = sets
        .iter()
        .zip(assignment)
        .enumerate()
        .map(|(i, (set, &choice))| {
            let class = set.classes.get(choice).ok_or_else(|| {
                Error::InvalidAssignment(format!(
                    "orbit {i}: class {choice} out of range (0..{})",
                    set.cardinality
                ))
            })?;
            let lambda: Vec<String> = class.lambda.iter().map(|x| x.to_string()).collect();
            Ok(format!("x{i}:[{}]/{}", lambda.join(","), class.m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.join(";"))
}

/// Every assignment, in lexicographic order.
pub fn all_assignments(sets: &[CohomologySet]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for s in sets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s.cardinality).map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit(family: Family, rank: usize, tau_order: u32, m: u64) -> RamifiedOrbit {
        RamifiedOrbit {
            m,
            family,
            rank,
            tau_order,
        }
    }

    #[test]
    fn covering_examples() {
        assert!(!covering_exists(0, &[5]).unwrap().exists);
        let v = covering_exists(0, &[2, 3]).unwrap();
        assert!(!v.exists);
        assert!(v.reason.contains("s=2"));
        assert!(covering_exists(1, &[2, 2, 4]).unwrap().exists);
        assert!(covering_exists(0, &[3, 3]).unwrap().exists);
        assert!(covering_exists(0, &[]).unwrap().exists);
        assert!(covering_exists(0, &[1]).is_err());
    }

    #[test]
    fn local_types() {
        let cd = CoveringData {
            genus: 2,
            orbits: vec![orbit(Family::A, 3, 2, 2), orbit(Family::A, 4, 2, 2)],
        };
        let sets = local_type_sets(&cd, Isogeny::SimplyConnected).unwrap();
        assert_eq!(sets[0].cardinality, 2);
        assert_eq!(sets[1].cardinality, 1);
        let empty = CoveringData {
            genus: 0,
            orbits: vec![],
        };
        assert!(local_type_sets(&empty, Isogeny::SimplyConnected)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn components() {
        for s in 0..4 {
            let cd = CoveringData {
                genus: 1,
                orbits: vec![orbit(Family::A, 3, 2, 2); s],
            };
            assert_eq!(
                component_count(&cd, Isogeny::SimplyConnected).unwrap(),
                1 << s
            );
        }
        let cd = CoveringData {
            genus: 1,
            orbits: vec![orbit(Family::A, 2, 1, 2); 2],
        };
        assert_eq!(component_count(&cd, Isogeny::SimplyConnected).unwrap(), 4);
        assert_eq!(
            component_count(&cd, Isogeny::Adjoint).unwrap_err(),
            Error::NotSimplyConnected
        );
    }

    #[test]
    fn singleton_orbits_do_not_change_count() {
        let mut cd = CoveringData {
            genus: 3,
            orbits: vec![orbit(Family::D, 4, 3, 3)],
        };
        let before = component_count(&cd, Isogeny::SimplyConnected).unwrap();
        cd.orbits.push(orbit(Family::A, 4, 2, 2));
        assert_eq!(
            component_count(&cd, Isogeny::SimplyConnected).unwrap(),
            before
        );
    }

    #[test]
    fn labels() {
        let cd = CoveringData {
            genus: 1,
            orbits: vec![orbit(Family::A, 3, 2, 2), orbit(Family::A, 1, 1, 3)],
        };
        let sets = local_type_sets(&cd, Isogeny::SimplyConnected).unwrap();
        let all = all_assignments(&sets);
        let labels: std::collections::HashSet<String> = all
            .iter()
            .map(|a| bundle_label(&sets, a).unwrap())
            .collect();
        assert_eq!(
            labels.len() as u128,
            component_count(&cd, Isogeny::SimplyConnected).unwrap()
        );
        assert_eq!(bundle_label(&sets, &[0, 0]).unwrap(), "x0:[0,0]/2;x1:[0]/3");
        assert_eq!(bundle_label(&sets, &[1, 0]).unwrap(), "x0:[0,1]/2;x1:[0]/3");
        assert!(matches!(
            bundle_label(&sets, &[2, 0]),
            Err(Error::InvalidAssignment(_))
        ));
        assert!(bundle_label(&sets, &[0]).is_err());
        assert_eq!(bundle_label(&[], &[]).unwrap(), "unramified");
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"genus": 1, "orbits": [{"m": 2, "type": "A", "rank": 3, "tau_order": 2}]}"#;
        let cd = CoveringData::from_json(text).unwrap();
        assert_eq!(cd.orbits[0].family, Family::A);
        let again = CoveringData::from_json(&serde_json::to_string(&cd).unwrap()).unwrap();
        assert_eq!(cd, again);
        let bad = r#"{"genus": 1, "orbits": [{"m": 3, "type": "A", "rank": 3, "tau_order": 2}]}"#;
        assert!(CoveringData::from_json(bad).is_err());
    }
}
