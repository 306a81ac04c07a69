use serde::{Deserialize, Serialize};

use super::{centralizer_condition, FiniteAlgebra, Partition, ProductView};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::terms::taylor_report;
use crate::Tri;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct R3Failure {
    /// The fixed element a of the section R_{a,i}.
    pub element: usize,
    /// 1, 2 or 3.
    pub coordinate: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct R3Report {
    pub holds: bool,
    pub failure: Option<R3Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineReport {
    pub is_abelian: bool,
    pub has_taylor: Tri,
    /// Abelian and Taylor.
    pub is_affine: Tri,
    pub r3: Option<R3Report>,
}

/// Abelianness via C(1, 1; 0), affineness as abelian plus Taylor, and the
/// bijective-sections test for an optional compatible ternary relation.
pub fn affine_checks(alg: &FiniteAlgebra, r3: Option<&[Vec<usize>]>, caps: &Caps) -> Result<AffineReport> {
    let one = Partition::indiscrete(alg.size);
    let is_abelian = centralizer_condition(alg, &one, &one)?;
    let has_taylor = taylor_report(alg, caps).has_taylor;
    let is_affine = match (is_abelian, has_taylor) {
        (false, _) | (_, Tri::No) => Tri::No,
        (true, Tri::Yes) => Tri::Yes,
        _ => Tri::Unknown,
    };
    let r3 = r3.map(|r| r3_sections(alg, r)).transpose()?;
    Ok(AffineReport {
        is_abelian,
        has_taylor,
        is_affine,
        r3,
    })
}

fn r3_sections(alg: &FiniteAlgebra, r: &[Vec<usize>]) -> Result<R3Report> {
    let n = alg.size;
    if r.iter().any(|t| t.len() != 3 || t.iter().any(|&x| x >= n)) {
        return Err(Error::NotCompatible(
            "R3 must consist of triples over the carrier".into(),
        ));
    }
    if !ProductView::power(alg, 3).is_closed(r) {
        return Err(Error::NotCompatible(format!(
            "R3 is not a subuniverse of {}^3",
            alg.name
        )));
    }
    for a in 0..n {
        for coordinate in 1..=3 {
            let (i, j) = match coordinate {
                1 => (1, 2),
                2 => (0, 2),
                _ => (0, 1),
            };
            let mut graph = vec![Vec::new(); n];
            for t in r.iter().filter(|t| t[coordinate - 1] == a) {
                graph[t[i]].push(t[j]);
            }
            let mut hit = vec![false; n];
            let mut reason = None;
            for (x, ys) in graph.iter().enumerate() {
                if ys.len() != 1 {
                    reason = Some(format!("{x} has {} images", ys.len()));
                    break;
                }
                if std::mem::replace(&mut hit[ys[0]], true) {
                    reason = Some(format!("{} has several preimages", ys[0]));
                    break;
                }
            }
            if let Some(reason) = reason {
                return Ok(R3Report {
                    holds: false,
                    failure: Some(R3Failure {
                        element: a,
                        coordinate,
                        reason,
                    }),
                });
            }
        }
    }
    Ok(R3Report {
        holds: true,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::for_each_tuple;
    use crate::catalog;

    #[test]
    fn z2_is_affine() {
        let z2 = catalog::z2_minority();
        let mut graph = Vec::new();
        for_each_tuple(2, 2, |t| graph.push(vec![t[0], t[1], t[0] ^ t[1]]));
        let r = affine_checks(&z2, Some(&graph), &Caps::default()).unwrap();
        assert!(r.is_abelian);
        assert_eq!(r.is_affine, Tri::Yes);
        assert!(r.r3.unwrap().holds);
    }

    #[test]
    fn majority_is_not_abelian() {
        let r = affine_checks(&catalog::majority(), None, &Caps::default()).unwrap();
        assert!(!r.is_abelian);
        assert_eq!(r.is_affine, Tri::No);
    }

    #[test]
    fn incompatible_r3_rejected() {
        let m = catalog::majority();
        let r = vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
        assert!(matches!(
            affine_checks(&m, Some(&r), &Caps::default()),
            Err(Error::NotCompatible(_))
        ));
    }

    #[test]
    fn full_relation_fails_sections() {
        let z2 = catalog::z2_minority();
        let mut all = Vec::new();
        for_each_tuple(2, 3, |t| all.push(t.to_vec()));
        let rep = affine_checks(&z2, Some(&all), &Caps::default()).unwrap().r3.unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.failure.unwrap().element, 0);
    }
}
