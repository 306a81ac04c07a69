use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, ProductView};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    /// Index into [`Instance::algebras`].
    pub domain: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, domain: usize) -> Self {
        Variable {
            name: name.into(),
            domain,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    /// Variable indices; strictly increasing after normalization.
    pub scope: Vec<usize>,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl Constraint {
    pub fn new(scope: Vec<usize>, tuples: impl IntoIterator<Item = Vec<usize>>) -> Self {
        Constraint {
            scope,
            tuples: tuples.into_iter().collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    /// Positions of `sub` inside the scope, if `sub` is contained in it.
    pub fn positions(&self, sub: &[usize]) -> Option<Vec<usize>> {
        sub.iter().map(|v| self.scope.iter().position(|s| s == v)).collect()
    }

    /// Projection onto the sorted subscope `sub`.
    pub fn project(&self, sub: &[usize]) -> Option<BTreeSet<Vec<usize>>> {
        let pos = self.positions(sub)?;
        Some(
            self.tuples
                .iter()
                .map(|t| pos.iter().map(|&p| t[p]).collect())
                .collect(),
        )
    }
}

/// A multisorted CSP instance: variables with domain algebras and
/// constraints over sets of variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub algebras: Vec<FiniteAlgebra>,
    pub variables: Vec<Variable>,
    /// Sorted by (arity, scope); scopes are pairwise distinct.
    pub constraints: Vec<Constraint>,
}

impl Instance {
    /// Validates and normalizes: scopes are sorted with tuples permuted
    /// accordingly, repeated variables are identified, and constraints with
    /// equal scopes are intersected.
    pub fn new(
        name: impl Into<String>,
        algebras: Vec<FiniteAlgebra>,
        variables: Vec<Variable>,
        constraints: Vec<Constraint>,
    ) -> Result<Self> {
        let name = name.into();
        let mut names = BTreeSet::new();
        for v in &variables {
            if v.domain >= algebras.len() {
                return Err(Error::InvalidInstance(format!(
                    "variable {} refers to domain {} of {}",
                    v.name,
                    v.domain,
                    algebras.len()
                )));
            }
            if !names.insert(v.name.as_str()) {
                return Err(Error::InvalidInstance(format!("variable {} declared twice", v.name)));
            }
        }
        let sizes: Vec<usize> = variables.iter().map(|v| algebras[v.domain].size).collect();
        let mut merged: BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>> = BTreeMap::new();
        for c in constraints {
            let (scope, tuples) = normalize(&c, &sizes)?;
            match merged.get_mut(&scope) {
                Some(existing) => existing.retain(|t| tuples.contains(t)),
                None => {
                    merged.insert(scope, tuples);
                }
            }
        }
        let mut constraints: Vec<Constraint> = merged
            .into_iter()
            .map(|(scope, tuples)| Constraint { scope, tuples })
            .collect();
        constraints.sort_by(|a, b| a.arity().cmp(&b.arity()).then_with(|| a.scope.cmp(&b.scope)));
        Ok(Instance {
            name,
            algebras,
            variables,
            constraints,
        })
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn domain(&self, var: usize) -> &FiniteAlgebra {
        &self.algebras[self.variables[var].domain]
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.domain(var).size
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn scope_names(&self, scope: &[usize]) -> Vec<String> {
        scope.iter().map(|&v| self.variables[v].name.clone()).collect()
    }

    pub fn constraint_on(&self, scope: &[usize]) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.scope == scope)
    }

    /// Number of total assignments.
    pub fn search_space(&self) -> u128 {
        (0..self.len()).fold(1u128, |acc, v| acc.saturating_mul(self.domain_size(v) as u128))
    }

    pub fn satisfies(&self, assignment: &[usize]) -> bool {
        assignment.len() == self.len()
            && assignment.iter().enumerate().all(|(v, &x)| x < self.domain_size(v))
            && self.constraints.iter().all(|c| {
                let t: Vec<usize> = c.scope.iter().map(|&v| assignment[v]).collect();
                c.tuples.contains(&t)
            })
    }

    /// Whether every constraint relation is a subuniverse of the product of
    /// its scope's domains.
    pub fn relations_are_subuniverses(&self) -> Result<bool> {
        for c in &self.constraints {
            let factors: Vec<&FiniteAlgebra> = c.scope.iter().map(|&v| self.domain(v)).collect();
            let view = ProductView::new(&factors)?;
            let tuples: Vec<Vec<usize>> = c.tuples.iter().cloned().collect();
            if !view.is_closed(&tuples) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every constraint projects onto each of its variables' full domain.
    pub fn is_subdirect(&self) -> bool {
        self.constraints.iter().all(|c| {
            c.scope.iter().enumerate().all(|(p, &v)| {
                let seen: BTreeSet<usize> = c.tuples.iter().map(|t| t[p]).collect();
                seen.len() == self.domain_size(v)
            })
        })
    }
}

fn normalize(c: &Constraint, sizes: &[usize]) -> Result<(Vec<usize>, BTreeSet<Vec<usize>>)> {
    if c.scope.is_empty() {
        return Err(Error::InvalidInstance("constraint with empty scope".into()));
    }
    if let Some(&v) = c.scope.iter().find(|&&v| v >= sizes.len()) {
        return Err(Error::InvalidInstance(format!(
            "constraint mentions unknown variable {v}"
        )));
    }
    for t in &c.tuples {
        if t.len() != c.scope.len() {
            return Err(Error::InvalidInstance(format!(
                "tuple {t:?} has length {} but the scope has {}",
                t.len(),
                c.scope.len()
            )));
        }
        if let Some((p, _)) = t.iter().enumerate().find(|&(p, &x)| x >= sizes[c.scope[p]]) {
            return Err(Error::InvalidInstance(format!(
                "tuple {t:?} leaves the domain of variable {}",
                c.scope[p]
            )));
        }
    }
    let scope: Vec<usize> = c.scope.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let first: Vec<usize> = scope
        .iter()
        .map(|v| c.scope.iter().position(|s| s == v).expect("present"))
        .collect();
    let tuples = c
        .tuples
        .iter()
        .filter(|t| {
            c.scope
                .iter()
                .enumerate()
                .all(|(p, v)| t[p] == t[first[scope.binary_search(v).expect("present")]])
        })
        .map(|t| first.iter().map(|&p| t[p]).collect())
        .collect();
    Ok((scope, tuples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn normalization_sorts_and_merges() {
        let z2 = catalog::z2_minority();
        let inst = Instance::new(
            "t",
            vec![z2],
            vec![Variable::new("x", 0), Variable::new("y", 0)],
            vec![
                Constraint::new(vec![1, 0], [vec![0, 1], vec![1, 1]]),
                Constraint::new(vec![0, 1], [vec![1, 0], vec![0, 0]]),
            ],
        )
        .unwrap();
        assert_eq!(inst.constraints.len(), 1);
        assert_eq!(inst.constraints[0].scope, vec![0, 1]);
        assert_eq!(inst.constraints[0].tuples, BTreeSet::from([vec![1, 0]]));
    }

    #[test]
    fn repeated_variables_are_identified() {
        let inst = Instance::new(
            "t",
            vec![catalog::z2_minority()],
            vec![Variable::new("x", 0)],
            vec![Constraint::new(vec![0, 0], [vec![0, 0], vec![0, 1]])],
        )
        .unwrap();
        assert_eq!(inst.constraints[0].scope, vec![0]);
        assert_eq!(inst.constraints[0].tuples, BTreeSet::from([vec![0]]));
    }

    #[test]
    fn rejects_bad_tuples() {
        let r = Instance::new(
            "t",
            vec![catalog::z2_minority()],
            vec![Variable::new("x", 0)],
            vec![Constraint::new(vec![0], [vec![2]])],
        );
        assert!(matches!(r, Err(Error::InvalidInstance(_))));
    }
}
