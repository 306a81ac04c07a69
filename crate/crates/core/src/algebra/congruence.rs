use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::partition::UnionFind;
use super::{for_each_tuple, FiniteAlgebra, Partition, PolynomialMonoid};
use crate::error::{Error, Result};

/// Calls `f` with every basic translation x ↦ f(c₁,…,x,…,c_k) as a value
/// vector.
fn for_each_translation(alg: &FiniteAlgebra, mut f: impl FnMut(&[usize])) {
    let n = alg.size;
    let mut image = vec![0usize; n];
    let mut args = Vec::new();
    for (op, o) in alg.ops.iter().enumerate() {
        for pos in 0..o.arity {
            for_each_tuple(n, o.arity - 1, |rest| {
                for (x, slot) in image.iter_mut().enumerate() {
                    args.clear();
                    args.extend_from_slice(&rest[..pos]);
                    args.push(x);
                    args.extend_from_slice(&rest[pos..]);
                    *slot = alg.apply(op, &args);
                }
                f(&image);
            });
        }
    }
}

pub fn is_congruence(alg: &FiniteAlgebra, theta: &Partition) -> bool {
    if theta.size() != alg.size {
        return false;
    }
    let first = theta.representatives();
    let reps: Vec<usize> = (0..alg.size).map(|x| first[theta.block_of(x)]).collect();
    let mut ok = true;
    for_each_translation(alg, |t| {
        if ok {
            ok = (0..alg.size).all(|x| theta.same(t[x], t[reps[x]]));
        }
    });
    ok
}

/// Cg(a, b): the least equivalence containing (a, b) that is closed under
/// basic translations.
pub fn principal_congruence(alg: &FiniteAlgebra, a: usize, b: usize) -> Partition {
    let n = alg.size;
    let mut translations: Vec<Vec<usize>> = Vec::new();
    for_each_translation(alg, |t| translations.push(t.to_vec()));
    translations.sort();
    translations.dedup();
    let mut uf = UnionFind::new(n);
    let mut queue = Vec::new();
    if uf.union(a, b) {
        queue.push((a, b));
    }
    while let Some((x, y)) = queue.pop() {
        for t in &translations {
            let (u, v) = (t[x], t[y]);
            if uf.union(u, v) {
                queue.push((u, v));
            }
        }
    }
    uf.partition()
}

/// Cg(a, b) as the equivalence generated by {(p(a), p(b)) : p unary polynomial}.
pub fn principal_congruence_via_polynomials(
    alg: &FiniteAlgebra,
    polys: &PolynomialMonoid,
    a: usize,
    b: usize,
) -> Partition {
    Partition::generated_by(alg.size, polys.maps.iter().map(|p| (p[a], p[b])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    /// Cg(a, b) for every a < b.
    pub principal: Vec<((usize, usize), Partition)>,
    /// All congruences, finest first.
    pub all: Vec<Partition>,
    pub monolith: Option<Partition>,
    pub is_subdirectly_irreducible: bool,
}

impl CongruenceReport {
    pub fn contains(&self, theta: &Partition) -> bool {
        self.all.contains(theta)
    }

    /// Congruences covering 0_A.
    pub fn atoms(&self) -> Vec<&Partition> {
        let zero = Partition::discrete(self.all.first().map_or(0, |p| p.size()));
        self.all
            .iter()
            .filter(|p| **p != zero)
            .filter(|p| !self.all.iter().any(|q| *q != zero && q != *p && q.le(p)))
            .collect()
    }
}

/// Principal congruences, the full congruence set and the monolith.
pub fn congruences(alg: &FiniteAlgebra, cap: usize) -> Result<CongruenceReport> {
    let n = alg.size;
    if n > cap {
        return Err(Error::cap(format!("congruences of {}", alg.name), cap));
    }
    let mut principal = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            principal.push(((a, b), principal_congruence(alg, a, b)));
        }
    }
    let mut set: BTreeSet<Partition> = BTreeSet::new();
    set.insert(Partition::discrete(n));
    let mut frontier: Vec<Partition> = Vec::new();
    for (_, p) in &principal {
        if set.insert(p.clone()) {
            frontier.push(p.clone());
        }
    }
    let generators: Vec<Partition> = set.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        for g in &generators {
            let j = p.join(g);
            if set.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut all: Vec<Partition> = set.into_iter().collect();
    all.sort_by(|x, y| y.num_blocks().cmp(&x.num_blocks()).then_with(|| x.cmp(y)));
    let mut report = CongruenceReport {
        principal,
        all,
        monolith: None,
        is_subdirectly_irreducible: false,
    };
    let atoms = report.atoms();
    if n > 1 && atoms.len() == 1 {
        report.monolith = Some(atoms[0].clone());
        report.is_subdirectly_irreducible = true;
    }
    Ok(report)
}

/// All congruences, finest first.
pub fn congruence_lattice(alg: &FiniteAlgebra, cap: usize) -> Result<Vec<Partition>> {
    Ok(congruences(alg, cap)?.all)
}
