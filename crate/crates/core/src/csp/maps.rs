use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::instance::{Constraint, Instance, Variable};
use crate::algebra::{unary_polynomials, FiniteAlgebra, OperationTable, PolynomialMonoid};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// One unary map per variable, given by its value vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistentMapSet {
    pub maps: Vec<Vec<usize>>,
}

impl ConsistentMapSet {
    pub fn identity(inst: &Instance) -> Self {
        ConsistentMapSet {
            maps: (0..inst.len()).map(|v| (0..inst.domain_size(v)).collect()).collect(),
        }
    }

    pub fn is_retractive(&self) -> bool {
        self.maps.iter().all(|p| p.iter().all(|&x| p[x] == x))
    }

    /// Sorted image of the map for `var`.
    pub fn image(&self, var: usize) -> Vec<usize> {
        let img: std::collections::BTreeSet<usize> = self.maps[var].iter().copied().collect();
        img.into_iter().collect()
    }

    /// Applies the maps coordinatewise to an assignment.
    pub fn apply(&self, assignment: &[usize]) -> Vec<usize> {
        assignment.iter().enumerate().map(|(v, &x)| self.maps[v][x]).collect()
    }
}

/// The retracted instance p(P) with embeddings of its domains back into the
/// original ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Retraction {
    pub instance: Instance,
    /// For each variable, new element i is original element `embeddings[v][i]`.
    pub embeddings: Vec<Vec<usize>>,
}

impl Retraction {
    /// A solution of p(P) read in the original domains.
    pub fn lift(&self, solution: &[usize]) -> Vec<usize> {
        solution
            .iter()
            .enumerate()
            .map(|(v, &x)| self.embeddings[v][x])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapReport {
    pub retractive: bool,
    /// Variables whose map is not surjective.
    pub shrunk: Vec<usize>,
    pub retraction: Option<Retraction>,
}

/// Checks that each map is a unary polynomial of its domain and that every
/// constraint tuple is sent into its relation. With `apply`, additionally
/// requires idempotence and builds p(P).
pub fn consistent_maps(inst: &Instance, p: &ConsistentMapSet, apply: bool, caps: &Caps) -> Result<MapReport> {
    if p.maps.len() != inst.len() {
        return Err(Error::ArityMismatch(format!(
            "{} maps for {} variables",
            p.maps.len(),
            inst.len()
        )));
    }
    for (v, m) in p.maps.iter().enumerate() {
        let n = inst.domain_size(v);
        if m.len() != n || m.iter().any(|&x| x >= n) {
            return Err(Error::ArityMismatch(format!(
                "map {m:?} for variable {} is not a self-map of a {n}-element domain",
                inst.variables[v].name
            )));
        }
    }
    let mut monoids: BTreeMap<usize, PolynomialMonoid> = BTreeMap::new();
    for (v, var) in inst.variables.iter().enumerate() {
        if let std::collections::btree_map::Entry::Vacant(e) = monoids.entry(var.domain) {
            e.insert(unary_polynomials(&inst.algebras[var.domain], caps.closure)?);
        }
        if !monoids[&var.domain].contains(&p.maps[v]) {
            return Err(Error::NotPolynomial { var: var.name.clone() });
        }
    }
    for c in &inst.constraints {
        for t in &c.tuples {
            let image: Vec<usize> = c.scope.iter().zip(t).map(|(&v, &x)| p.maps[v][x]).collect();
            if !c.tuples.contains(&image) {
                return Err(Error::NotConsistent {
                    scope: inst.scope_names(&c.scope),
                    tuple: t.clone(),
                    image,
                });
            }
        }
    }
    let retractive = p.is_retractive();
    let shrunk = (0..inst.len())
        .filter(|&v| p.image(v).len() < inst.domain_size(v))
        .collect();
    let retraction = if apply {
        if let Some(v) = (0..inst.len()).find(|&v| p.maps[v].iter().any(|&x| p.maps[v][x] != x)) {
            return Err(Error::NotRetractive {
                var: inst.variables[v].name.clone(),
            });
        }
        Some(retract(inst, p)?)
    } else {
        None
    };
    Ok(MapReport {
        retractive,
        shrunk,
        retraction,
    })
}

/// The algebra on p(A) whose operations are p composed with those of A.
pub fn retract_algebra(alg: &FiniteAlgebra, p: &[usize]) -> Result<FiniteAlgebra> {
    let image: Vec<usize> = (0..alg.size).filter(|&x| p[x] == x).collect();
    let mut pos = vec![usize::MAX; alg.size];
    for (i, &e) in image.iter().enumerate() {
        pos[e] = i;
    }
    let m = image.len();
    let mut args = Vec::new();
    let ops = alg
        .ops
        .iter()
        .enumerate()
        .map(|(op, o)| {
            OperationTable::from_fn(o.symbol.clone(), o.arity, m, |t| {
                args.clear();
                args.extend(t.iter().map(|&i| image[i]));
                pos[p[alg.apply(op, &args)]]
            })
        })
        .collect();
    let label: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    FiniteAlgebra::new(format!("{}|p[{}]", alg.name, label.join(",")), m, ops)
}

fn retract(inst: &Instance, p: &ConsistentMapSet) -> Result<Retraction> {
    let mut algebras: Vec<FiniteAlgebra> = Vec::new();
    let mut index: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    let mut variables = Vec::new();
    let mut embeddings = Vec::new();
    let mut positions = Vec::new();
    for (v, var) in inst.variables.iter().enumerate() {
        let map = &p.maps[v];
        let key = (var.domain, map.clone());
        let domain = match index.get(&key) {
            Some(&d) => d,
            None => {
                let identity = map.iter().enumerate().all(|(i, &x)| i == x);
                let alg = if identity {
                    inst.algebras[var.domain].clone()
                } else {
                    retract_algebra(&inst.algebras[var.domain], map)?
                };
                algebras.push(alg);
                index.insert(key, algebras.len() - 1);
                algebras.len() - 1
            }
        };
        variables.push(Variable::new(var.name.clone(), domain));
        let image = p.image(v);
        let mut pos = vec![usize::MAX; map.len()];
        for (i, &e) in image.iter().enumerate() {
            pos[e] = i;
        }
        embeddings.push(image);
        positions.push(pos);
    }
    let constraints = inst
        .constraints
        .iter()
        .map(|c| Constraint {
            scope: c.scope.clone(),
            tuples: c
                .tuples
                .iter()
                .filter(|t| c.scope.iter().zip(t.iter()).all(|(&v, &x)| p.maps[v][x] == x))
                .map(|t| c.scope.iter().zip(t.iter()).map(|(&v, &x)| positions[v][x]).collect())
                .collect(),
        })
        .collect();
    let instance = Instance::new(format!("{}|p", inst.name), algebras, variables, constraints)?;
    Ok(Retraction { instance, embeddings })
}
