use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::instance::{Constraint, Instance, Variable};
use crate::algebra::{centralizer_condition, congruences, is_congruence, quotient, FiniteAlgebra, Partition};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// Replaces the domain of every variable with a given congruence by the
/// quotient and maps every relation blockwise.
pub fn quotient_instance(inst: &Instance, congruences: &[Option<Partition>]) -> Result<Instance> {
    if congruences.len() != inst.len() {
        return Err(Error::ArityMismatch(format!(
            "{} congruences for {} variables",
            congruences.len(),
            inst.len()
        )));
    }
    let mut algebras: Vec<FiniteAlgebra> = Vec::new();
    let mut index: BTreeMap<(usize, Option<Partition>), usize> = BTreeMap::new();
    let mut variables = Vec::new();
    for (v, var) in inst.variables.iter().enumerate() {
        let alg = &inst.algebras[var.domain];
        let theta = &congruences[v];
        if let Some(t) = theta {
            if t.size() != alg.size || !is_congruence(alg, t) {
                return Err(Error::NotACongruence(format!("{t} on {} for {}", alg.name, var.name)));
            }
        }
        let key = (var.domain, theta.clone());
        let domain = match index.get(&key) {
            Some(&d) => d,
            None => {
                algebras.push(match theta {
                    Some(t) => quotient(alg, t)?,
                    None => alg.clone(),
                });
                index.insert(key, algebras.len() - 1);
                algebras.len() - 1
            }
        };
        variables.push(Variable::new(var.name.clone(), domain));
    }
    let image = |v: usize, x: usize| congruences[v].as_ref().map_or(x, |t| t.block_of(x));
    let constraints = inst
        .constraints
        .iter()
        .map(|c| Constraint {
            scope: c.scope.clone(),
            tuples: c
                .tuples
                .iter()
                .map(|t| c.scope.iter().zip(t).map(|(&v, &x)| image(v, x)).collect())
                .collect(),
        })
        .collect();
    Instance::new(format!("{}/mu", inst.name), algebras, variables, constraints)
}

/// Congruences with exactly one upper cover, i.e. the completely
/// meet-irreducible ones, finest first.
pub fn meet_irreducibles(all: &[Partition]) -> Vec<Partition> {
    all.iter()
        .filter(|p| {
            let above: Vec<&Partition> = all.iter().filter(|q| *q != *p && p.le(q)).collect();
            let covers = above
                .iter()
                .filter(|q| !above.iter().any(|r| r != *q && r.le(q)))
                .count();
            covers == 1
        })
        .cloned()
        .collect()
}

/// An instance whose domains are all subdirectly irreducible or trivial,
/// with the correspondence to the original variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiDecomposition {
    pub instance: Instance,
    /// For each new variable: the original variable and the congruence factored out.
    pub origin: Vec<(usize, Partition)>,
}

impl SiDecomposition {
    /// Translates a solution of the original instance.
    pub fn project(&self, solution: &[usize]) -> Vec<usize> {
        self.origin.iter().map(|(v, t)| t.block_of(solution[*v])).collect()
    }

    /// Recovers the original solution from a solution of the decomposed one.
    pub fn lift(&self, original: &Instance, solution: &[usize]) -> Option<Vec<usize>> {
        (0..original.len())
            .map(|v| {
                (0..original.domain_size(v)).find(|&x| {
                    self.origin
                        .iter()
                        .zip(solution)
                        .filter(|((w, _), _)| *w == v)
                        .all(|((_, t), &y)| t.block_of(x) == y)
                })
            })
            .collect()
    }
}

/// Splits every domain that is neither trivial nor subdirectly irreducible
/// into its quotients by a set of completely meet-irreducible congruences
/// meeting to zero, linked by the image of the diagonal embedding.
/// Variables are split in index order; redundant factors are dropped greedily.
pub fn si_decompose(inst: &Instance, caps: &Caps) -> Result<SiDecomposition> {
    let mut factors_of: BTreeMap<usize, Vec<Partition>> = BTreeMap::new();
    for (d, alg) in inst.algebras.iter().enumerate() {
        let n = alg.size;
        let report = congruences(alg, caps.congruence_size)?;
        if n <= 1 || report.is_subdirectly_irreducible {
            factors_of.insert(d, vec![Partition::discrete(n)]);
            continue;
        }
        let mut chosen = meet_irreducibles(&report.all);
        let zero = Partition::discrete(n);
        let meet = |ps: &[Partition]| ps.iter().fold(Partition::indiscrete(n), |acc, p| acc.meet(p));
        let mut i = 0;
        while i < chosen.len() {
            let mut rest = chosen.clone();
            rest.remove(i);
            if !rest.is_empty() && meet(&rest) == zero {
                chosen = rest;
            } else {
                i += 1;
            }
        }
        factors_of.insert(d, chosen);
    }
    let mut algebras: Vec<FiniteAlgebra> = Vec::new();
    let mut alg_index: BTreeMap<(usize, Partition), usize> = BTreeMap::new();
    let mut variables = Vec::new();
    let mut origin = Vec::new();
    let mut new_vars: Vec<Vec<usize>> = Vec::new();
    for (v, var) in inst.variables.iter().enumerate() {
        let factors = &factors_of[&var.domain];
        let mut mine = Vec::new();
        for (i, theta) in factors.iter().enumerate() {
            let key = (var.domain, theta.clone());
            let domain = match alg_index.get(&key) {
                Some(&d) => d,
                None => {
                    let alg = &inst.algebras[var.domain];
                    algebras.push(if theta.is_discrete() {
                        alg.clone()
                    } else {
                        quotient(alg, theta)?
                    });
                    alg_index.insert(key, algebras.len() - 1);
                    algebras.len() - 1
                }
            };
            let name = if factors.len() == 1 {
                var.name.clone()
            } else {
                format!("{}#{}", var.name, i + 1)
            };
            mine.push(variables.len());
            variables.push(Variable::new(name, domain));
            origin.push((v, theta.clone()));
        }
        new_vars.push(mine);
    }
    let mut constraints = Vec::new();
    for c in &inst.constraints {
        let scope: Vec<usize> = c.scope.iter().flat_map(|&v| new_vars[v].iter().copied()).collect();
        let tuples: BTreeSet<Vec<usize>> = c
            .tuples
            .iter()
            .map(|t| {
                c.scope
                    .iter()
                    .zip(t)
                    .flat_map(|(&v, &x)| new_vars[v].iter().map(move |&w| (w, x)))
                    .map(|(w, x)| origin[w].1.block_of(x))
                    .collect()
            })
            .collect();
        constraints.push(Constraint { scope, tuples });
    }
    for (v, mine) in new_vars.iter().enumerate() {
        if mine.len() > 1 {
            let tuples = (0..inst.domain_size(v))
                .map(|x| mine.iter().map(|&w| origin[w].1.block_of(x)).collect())
                .collect();
            constraints.push(Constraint {
                scope: mine.clone(),
                tuples,
            });
        }
    }
    let instance = Instance::new(format!("{}/si", inst.name), algebras, variables, constraints)?;
    Ok(SiDecomposition { instance, origin })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainAnalysis {
    pub variable: String,
    pub size: usize,
    pub is_si: bool,
    pub monolith: Option<Partition>,
    pub is_large_centralizer: bool,
    /// Why the variable is excluded, if it is.
    pub note: Option<String>,
}

/// Per variable: subdirect irreducibility, the monolith, and whether
/// C(1, μ; 0) holds.
pub fn large_centralizer_analysis(inst: &Instance, caps: &Caps) -> Result<Vec<DomainAnalysis>> {
    let mut per_domain: BTreeMap<usize, (bool, Option<Partition>, bool, Option<String>)> = BTreeMap::new();
    for (d, alg) in inst.algebras.iter().enumerate() {
        let n = alg.size;
        let entry = if n <= 1 {
            (false, None, false, Some("one-element domain".to_string()))
        } else {
            let report = congruences(alg, caps.congruence_size)?;
            match report.monolith {
                Some(mu) => {
                    let large = centralizer_condition(alg, &Partition::indiscrete(n), &mu)?;
                    (true, Some(mu), large, None)
                }
                None => (false, None, false, Some("not subdirectly irreducible".to_string())),
            }
        };
        per_domain.insert(d, entry);
    }
    Ok(inst
        .variables
        .iter()
        .map(|var| {
            let (is_si, monolith, large, note) = per_domain[&var.domain].clone();
            DomainAnalysis {
                variable: var.name.clone(),
                size: inst.algebras[var.domain].size,
                is_si,
                monolith,
                is_large_centralizer: large,
                note,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::product;
    use crate::catalog;
    use crate::csp::brute_force_solve;

    fn single(alg: FiniteAlgebra) -> Instance {
        Instance::new("one", vec![alg], vec![Variable::new("x", 0)], Vec::new()).unwrap()
    }

    #[test]
    fn discrete_quotient_is_isomorphic() {
        let inst = Instance::new(
            "t",
            vec![catalog::z2_minority()],
            vec![Variable::new("x", 0), Variable::new("y", 0)],
            vec![Constraint::new(vec![0, 1], [vec![0, 1], vec![1, 0]])],
        )
        .unwrap();
        let q = quotient_instance(&inst, &[Some(Partition::discrete(2)), None]).unwrap();
        assert_eq!(q.constraints, inst.constraints);
        let top = quotient_instance(&inst, &[Some(Partition::indiscrete(2)), None]).unwrap();
        assert_eq!(top.domain_size(0), 1);
        assert_eq!(top.constraints[0].tuples, BTreeSet::from([vec![0, 0], vec![0, 1]]));
    }

    #[test]
    fn rejects_non_congruence() {
        let inst = single(catalog::a1());
        let bad = Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(
            quotient_instance(&inst, &[Some(bad)]),
            Err(Error::NotACongruence(_))
        ));
    }

    #[test]
    fn product_domain_by_projection_kernel() {
        let p = product(&catalog::z2_minority(), &catalog::z2_minority()).unwrap();
        let inst = Instance::new(
            "p",
            vec![p],
            vec![Variable::new("x", 0), Variable::new("y", 0)],
            vec![Constraint::new(vec![0, 1], [vec![1, 2], vec![3, 3]])],
        )
        .unwrap();
        let kernel = Partition::from_labels(&[0, 0, 1, 1]);
        let q = quotient_instance(&inst, &[Some(kernel.clone()), Some(kernel)]).unwrap();
        assert_eq!(q.constraints[0].tuples, BTreeSet::from([vec![0, 1], vec![1, 1]]));
    }

    #[test]
    fn decomposition_preserves_solutions() {
        let inst = Instance::new(
            "p",
            vec![catalog::z2_times_semilattice()],
            vec![Variable::new("x", 0), Variable::new("y", 0)],
            vec![Constraint::new(vec![0, 1], [vec![0, 1], vec![3, 2], vec![2, 2]])],
        )
        .unwrap();
        let d = si_decompose(&inst, &Caps::default()).unwrap();
        assert_eq!(d.instance.len(), 4);
        let caps = Caps::default();
        assert!(large_centralizer_analysis(&d.instance, &caps)
            .unwrap()
            .iter()
            .all(|a| a.is_si));
        let before = brute_force_solve(&inst, 1000).unwrap();
        let after = brute_force_solve(&d.instance, 1000).unwrap();
        let projected: Vec<Vec<usize>> = before.iter().map(|s| d.project(s)).collect();
        assert_eq!(projected, after);
        for s in &after {
            assert!(before.contains(&d.lift(&inst, s).unwrap()));
        }
    }

    #[test]
    fn two_element_domains() {
        let caps = Caps::default();
        let z2 = large_centralizer_analysis(&single(catalog::z2_minority()), &caps).unwrap();
        assert!(z2[0].is_si && z2[0].is_large_centralizer);
        assert_eq!(z2[0].monolith, Some(Partition::indiscrete(2)));
        let sl = large_centralizer_analysis(&single(catalog::semilattice()), &caps).unwrap();
        assert!(sl[0].is_si && !sl[0].is_large_centralizer);
        let one = large_centralizer_analysis(&single(catalog::trivial("m", 3)), &caps).unwrap();
        assert!(!one[0].is_si && !one[0].is_large_centralizer);
    }
}
