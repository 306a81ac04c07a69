use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::instance::Instance;
use super::maps::{consistent_maps, ConsistentMapSet, Retraction};
use super::structure::{large_centralizer_analysis, quotient_instance, DomainAnalysis};
use crate::algebra::FiniteAlgebra;
use crate::bitset::Subset;
use crate::caps::Caps;
use crate::edges::{compute_edges, EdgeConfig, Flavor};
use crate::error::{Error, Result};
use crate::terms::universal_meet_family;

/// P/μ̄: every large centralizer domain factored by its monolith.
pub fn large_centralizer_quotient(inst: &Instance, analysis: &[DomainAnalysis]) -> Result<Instance> {
    let congs: Vec<_> = analysis
        .iter()
        .map(|a| {
            if a.is_large_centralizer {
                a.monolith.clone()
            } else {
                None
            }
        })
        .collect();
    quotient_instance(inst, &congs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeChoice {
    pub variable: usize,
    pub a: usize,
    pub b: usize,
    /// h_i, one element per variable.
    pub lift: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeCentredRetraction {
    pub maps: ConsistentMapSet,
    pub analysis: Vec<DomainAnalysis>,
    /// Large centralizer domains with an s-edge, in variable order.
    pub choices: Vec<EdgeChoice>,
    /// Per variable, the least m with (p')^m idempotent.
    pub exponents: Vec<usize>,
    /// No large centralizer domain has an s-edge; the maps are identities.
    pub vacuous: bool,
    /// Per choice, whether the domain of that variable strictly shrank.
    pub shrunk: Vec<bool>,
    pub retraction: Retraction,
}

impl LargeCentredRetraction {
    pub fn all_shrunk(&self) -> bool {
        self.shrunk.iter().all(|&s| s)
    }
}

/// Least m >= 1 with p^m idempotent, and p^m.
pub fn idempotent_power(p: &[usize]) -> (usize, Vec<usize>) {
    let n = p.len();
    let mut cur = p.to_vec();
    let mut m = 1;
    while (0..n).any(|x| cur[cur[x]] != cur[x]) {
        cur = cur.iter().map(|&x| p[x]).collect();
        m += 1;
    }
    (m, cur)
}

/// Builds the consistent retractive maps of the large centralizer
/// construction. `quotient_solutions` maps (variable, point of P/μ̄) to a
/// solution of P/μ̄ through that point. `targets` optionally names, per
/// variable, a set B whose elements should be preferred as edge targets; with
/// a binary absorbing B the resulting p_i maps into B.
pub fn largecentred_retraction(
    inst: &Instance,
    quotient_solutions: &BTreeMap<(usize, usize), Vec<usize>>,
    targets: &BTreeMap<usize, Subset>,
    caps: &Caps,
) -> Result<LargeCentredRetraction> {
    if let Some(alg) = inst.algebras.iter().find(|a| !a.same_signature(&inst.algebras[0])) {
        return Err(Error::PreconditionViolated(format!(
            "domains {} and {} have different signatures",
            inst.algebras[0].name, alg.name
        )));
    }
    let analysis = large_centralizer_analysis(inst, caps)?;
    let config = EdgeConfig {
        caps: caps.clone(),
        ..EdgeConfig::default()
    };
    let mut edge_cache: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    let mut choices = Vec::new();
    for (v, a) in analysis.iter().enumerate() {
        if !a.is_large_centralizer {
            continue;
        }
        let d = inst.variables[v].domain;
        if let std::collections::btree_map::Entry::Vacant(e) = edge_cache.entry(d) {
            let g = compute_edges(&inst.algebras[d], &config)?;
            e.insert(g.edges(Flavor::S));
        }
        let s_edges = &edge_cache[&d];
        let preferred = targets
            .get(&v)
            .and_then(|b| s_edges.iter().find(|&&(x, y)| !b.contains(x) && b.contains(y)));
        let Some(&(x, y)) = preferred.or(s_edges.first()) else {
            continue;
        };
        let mu = a.monolith.as_ref().expect("large centralizer domains are SI");
        let point = mu.block_of(y);
        let g = quotient_solutions.get(&(v, point)).ok_or_else(|| {
            Error::HypothesisUnmet(format!(
                "no solution of the quotient instance through block {point} of {}",
                inst.variables[v].name
            ))
        })?;
        let lift: Vec<usize> = analysis
            .iter()
            .enumerate()
            .map(|(j, aj)| {
                if j == v {
                    y
                } else if aj.is_large_centralizer {
                    aj.monolith.as_ref().expect("SI").representatives()[g[j]]
                } else {
                    g[j]
                }
            })
            .collect();
        choices.push(EdgeChoice {
            variable: v,
            a: x,
            b: y,
            lift,
        });
    }
    let vacuous = choices.is_empty();
    let (maps, exponents) = if vacuous {
        (ConsistentMapSet::identity(inst), vec![1; inst.len()])
    } else {
        let members: Vec<&FiniteAlgebra> = inst.algebras.iter().collect();
        let f = universal_meet_family(&members, caps)?;
        let mut maps = Vec::new();
        let mut exponents = Vec::new();
        for v in 0..inst.len() {
            let d = inst.variables[v].domain;
            let p1: Vec<usize> = (0..inst.domain_size(v))
                .map(|x| choices.iter().fold(x, |acc, c| f.apply(d, acc, c.lift[v])))
                .collect();
            let (m, p) = idempotent_power(&p1);
            maps.push(p);
            exponents.push(m);
        }
        (ConsistentMapSet { maps }, exponents)
    };
    let report = consistent_maps(inst, &maps, true, caps)?;
    let shrunk = choices
        .iter()
        .map(|c| maps.image(c.variable).len() < inst.domain_size(c.variable))
        .collect();
    Ok(LargeCentredRetraction {
        maps,
        analysis,
        choices,
        exponents,
        vacuous,
        shrunk,
        retraction: report.retraction.expect("apply mode"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::csp::{solutions_through_points, Constraint, Variable};

    #[test]
    fn idempotent_powers() {
        assert_eq!(idempotent_power(&[1, 2, 0]), (3, vec![0, 1, 2]));
        assert_eq!(idempotent_power(&[0, 0, 1]), (2, vec![0, 0, 0]));
        assert_eq!(idempotent_power(&[0, 1]), (1, vec![0, 1]));
    }

    #[test]
    fn affine_domains_without_s_edges_are_vacuous() {
        let inst = Instance::new(
            "z2",
            vec![catalog::z2_minority()],
            vec![Variable::new("x", 0), Variable::new("y", 0)],
            vec![Constraint::new(vec![0, 1], [vec![0, 1], vec![1, 0]])],
        )
        .unwrap();
        let caps = Caps::default();
        let analysis = large_centralizer_analysis(&inst, &caps).unwrap();
        let q = large_centralizer_quotient(&inst, &analysis).unwrap();
        let sols = solutions_through_points(&q, 1000).unwrap();
        let r = largecentred_retraction(&inst, &sols, &BTreeMap::new(), &caps).unwrap();
        assert!(r.vacuous && r.choices.is_empty());
        assert_eq!(r.maps, ConsistentMapSet::identity(&inst));
    }
}
