use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::instance::{Constraint, Instance};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Minimized {
    Refined(Instance),
    /// The relation on this scope became empty.
    Unsat {
        scope: Vec<usize>,
    },
}

impl Minimized {
    pub fn instance(&self) -> Option<&Instance> {
        match self {
            Minimized::Refined(i) => Some(i),
            Minimized::Unsat { .. } => None,
        }
    }
}

/// Nonempty subsets of `set` of size at most `k`, each sorted, by size then
/// lexicographically.
pub(crate) fn subsets_up_to(set: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k.min(set.len()) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s
                .last()
                .map_or(0, |&x| set.iter().position(|&y| y == x).expect("member") + 1);
            for &x in &set[start..] {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Calls `f` on every tuple of the mixed-radix product of `sizes`.
pub(crate) fn for_each_product(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut t = vec![0usize; sizes.len()];
    loop {
        f(&t);
        let mut p = sizes.len();
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            t[p] += 1;
            if t[p] < sizes[p] {
                break;
            }
            t[p] = 0;
        }
    }
}

fn project(rel: &BTreeSet<Vec<usize>>, pos: &[usize]) -> BTreeSet<Vec<usize>> {
    rel.iter().map(|t| pos.iter().map(|&p| t[p]).collect()).collect()
}

/// (k,l)-minimality: adds one relation for every scope of at most `l`
/// variables, initialized to the join of the constraints lying inside it,
/// then restricts every relation and every subscope relation of at most `k`
/// variables to each other's projections until nothing changes. Scopes with
/// more than `l` variables are kept and take part in the propagation. The
/// number of scopes grows as the sum of binomial(|V|, i) for i up to `l`.
pub fn kl_minimize(inst: &Instance, k: usize, l: usize) -> Result<Minimized> {
    if k == 0 || k > l {
        return Err(Error::PreconditionViolated(format!(
            "(k, l) = ({k}, {l}) needs 1 <= k <= l"
        )));
    }
    let vars: Vec<usize> = (0..inst.len()).collect();
    let mut rels: BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>> = BTreeMap::new();
    for w in subsets_up_to(&vars, l) {
        let inside: Vec<(&Constraint, Vec<usize>)> = inst
            .constraints
            .iter()
            .filter_map(|c| {
                let pos: Option<Vec<usize>> = c.scope.iter().map(|v| w.iter().position(|x| x == v)).collect();
                pos.map(|p| (c, p))
            })
            .collect();
        let sizes: Vec<usize> = w.iter().map(|&v| inst.domain_size(v)).collect();
        let mut rel = BTreeSet::new();
        let mut buf = Vec::new();
        for_each_product(&sizes, |t| {
            let keep = inside.iter().all(|(c, pos)| {
                buf.clear();
                buf.extend(pos.iter().map(|&p| t[p]));
                c.tuples.contains(buf.as_slice())
            });
            if keep {
                rel.insert(t.to_vec());
            }
        });
        rels.insert(w, rel);
    }
    for c in inst.constraints.iter().filter(|c| c.arity() > l) {
        rels.insert(c.scope.clone(), c.tuples.clone());
    }
    let links: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = rels
        .keys()
        .flat_map(|s| {
            subsets_up_to(s, k)
                .into_iter()
                .filter(|u| u != s)
                .map(|u| {
                    let pos = u
                        .iter()
                        .map(|v| s.iter().position(|x| x == v).expect("subset"))
                        .collect();
                    (s.clone(), u, pos)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    if let Some((scope, _)) = rels.iter().find(|(_, r)| r.is_empty()) {
        return Ok(Minimized::Unsat { scope: scope.clone() });
    }
    let mut changed = true;
    while changed {
        changed = false;
        for (s, u, pos) in &links {
            let proj = project(&rels[s], pos);
            let small = rels.get_mut(u).expect("small scopes are present");
            let before = small.len();
            small.retain(|t| proj.contains(t));
            changed |= small.len() != before;
            if small.is_empty() {
                return Ok(Minimized::Unsat { scope: u.clone() });
            }
            let small = small.clone();
            let big = rels.get_mut(s).expect("present");
            let before = big.len();
            big.retain(|t| small.contains(&pos.iter().map(|&p| t[p]).collect::<Vec<_>>()));
            changed |= big.len() != before;
            if big.is_empty() {
                return Ok(Minimized::Unsat { scope: s.clone() });
            }
        }
    }
    let constraints = rels
        .into_iter()
        .map(|(scope, tuples)| Constraint { scope, tuples })
        .collect();
    Ok(Minimized::Refined(Instance::new(
        inst.name.clone(),
        inst.algebras.clone(),
        inst.variables.clone(),
        constraints,
    )?))
}

/// Checks the two defining conditions of (k,l)-minimality.
pub fn is_kl_minimal(inst: &Instance, k: usize, l: usize) -> bool {
    let vars: Vec<usize> = (0..inst.len()).collect();
    let dense = subsets_up_to(&vars, l).iter().all(|w| inst.constraint_on(w).is_some());
    dense
        && inst.constraints.iter().all(|c| {
            subsets_up_to(&c.scope, k).iter().all(|u| match inst.constraint_on(u) {
                Some(r) => c.project(u).as_ref() == Some(&r.tuples),
                None => false,
            })
        })
}
