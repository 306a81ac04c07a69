use rand::seq::SliceRandom;
use rand::Rng;

use super::instance::{Constraint, Instance, Variable};
use super::largecentred::idempotent_power;
use super::maps::ConsistentMapSet;
use crate::algebra::{FiniteAlgebra, ProductView};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::terms::free_algebra_family;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomShape {
    pub max_variables: usize,
    pub max_constraints: usize,
    pub max_arity: usize,
    /// Generators drawn for each constraint relation.
    pub max_generators: usize,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            max_variables: 6,
            max_constraints: 5,
            max_arity: 3,
            max_generators: 3,
        }
    }
}

/// A random instance over `domains`, each constraint relation being the
/// subuniverse generated by a few random tuples.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    name: &str,
    domains: &[FiniteAlgebra],
    shape: &RandomShape,
    caps: &Caps,
) -> Result<Instance> {
    if domains.is_empty() {
        return Err(Error::InvalidInstance("no domains to draw from".into()));
    }
    let nv = rng.gen_range(1..=shape.max_variables.max(1));
    let variables: Vec<Variable> = (0..nv)
        .map(|i| Variable::new(format!("v{i}"), rng.gen_range(0..domains.len())))
        .collect();
    let nc = rng.gen_range(0..=shape.max_constraints);
    let mut constraints = Vec::new();
    let all: Vec<usize> = (0..nv).collect();
    for _ in 0..nc {
        let k = rng.gen_range(1..=shape.max_arity.clamp(1, nv));
        let mut scope: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
        scope.sort_unstable();
        let factors: Vec<&FiniteAlgebra> = scope.iter().map(|&v| &domains[variables[v].domain]).collect();
        let view = ProductView::new(&factors)?;
        let g = rng.gen_range(1..=shape.max_generators.max(1));
        let gens: Vec<Vec<usize>> = (0..g)
            .map(|_| factors.iter().map(|a| rng.gen_range(0..a.size)).collect())
            .collect();
        let closed = view.sg(gens, caps.closure);
        if !closed.complete {
            return Err(Error::cap("random constraint relation", caps.closure));
        }
        constraints.push(Constraint::new(scope, closed.elems));
    }
    Instance::new(name, domains.to_vec(), variables, constraints)
}

/// Retractive consistent map sets induced by a solution s: for every binary
/// term t of the domains' family, p_j is the idempotent power of
/// x ↦ t(x, s_j). Requires all domains to share a signature.
pub fn solution_retractions(inst: &Instance, solution: &[usize], caps: &Caps) -> Result<Vec<ConsistentMapSet>> {
    if !inst.satisfies(solution) {
        return Err(Error::PreconditionViolated(format!("{solution:?} is not a solution")));
    }
    let members: Vec<&FiniteAlgebra> = inst.algebras.iter().collect();
    let f2 = free_algebra_family(&members, 2, caps.closure)?;
    if !f2.complete {
        return Err(Error::cap("F(2) of the domain family", caps.closure));
    }
    let mut out: Vec<ConsistentMapSet> = Vec::new();
    for t in &f2.elements {
        let maps = (0..inst.len())
            .map(|v| {
                let d = inst.variables[v].domain;
                let n = inst.algebras[d].size;
                let off = f2.offset(d);
                let p: Vec<usize> = (0..n).map(|x| t[off + x * n + solution[v]] as usize).collect();
                idempotent_power(&p).1
            })
            .collect();
        let set = ConsistentMapSet { maps };
        if !out.contains(&set) {
            out.push(set);
        }
    }
    Ok(out)
}
