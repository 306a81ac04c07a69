use serde::{Deserialize, Serialize};

use crate::algebra::{congruences, enumerate_subuniverses, for_each_tuple, quotient, subalgebra, FiniteAlgebra};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// Largest carrier for which canonical forms are computed by trying every
/// relabelling.
pub const CANONICAL_SIZE: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub size: usize,
    /// (symbol, arity, relabelled table), sorted by symbol.
    pub ops: Vec<(String, usize, Vec<usize>)>,
}

fn relabel(alg: &FiniteAlgebra, perm: &[usize], order: &[usize]) -> Vec<(String, usize, Vec<usize>)> {
    let n = alg.size;
    let mut inv = vec![0; n];
    for (x, &y) in perm.iter().enumerate() {
        inv[y] = x;
    }
    order
        .iter()
        .map(|&op| {
            let o = &alg.ops[op];
            let mut table = Vec::with_capacity(o.table.len());
            let mut args = Vec::with_capacity(o.arity);
            for_each_tuple(n, o.arity, |t| {
                args.clear();
                args.extend(t.iter().map(|&y| inv[y]));
                table.push(perm[alg.apply(op, &args)]);
            });
            (o.symbol.clone(), o.arity, table)
        })
        .collect()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Lexicographically least relabelled table list; equal for isomorphic algebras.
pub fn canonical_form(alg: &FiniteAlgebra) -> Result<CanonicalForm> {
    let n = alg.size;
    if n > CANONICAL_SIZE {
        return Err(Error::cap(format!("canonical form of {}", alg.name), CANONICAL_SIZE));
    }
    let mut order: Vec<usize> = (0..alg.ops.len()).collect();
    order.sort_by(|&a, &b| alg.ops[a].symbol.cmp(&alg.ops[b].symbol));
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = relabel(alg, &perm, &order);
    while next_permutation(&mut perm) {
        let cand = relabel(alg, &perm, &order);
        if cand < best {
            best = cand;
        }
    }
    Ok(CanonicalForm { size: n, ops: best })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateMember {
    pub algebra: FiniteAlgebra,
    pub canonical: CanonicalForm,
    /// How the member was first reached.
    pub origin: String,
}

/// Isomorphism types reachable from the seeds by subalgebras and quotients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub members: Vec<TemplateMember>,
}

impl Template {
    pub fn algebras(&self) -> Vec<&FiniteAlgebra> {
        self.members.iter().map(|m| &m.algebra).collect()
    }

    /// Index of the member isomorphic to `alg`, if any.
    pub fn find(&self, alg: &FiniteAlgebra) -> Result<Option<usize>> {
        let c = canonical_form(alg)?;
        Ok(self.members.iter().position(|m| m.canonical == c))
    }
}

/// The closure of the seeds under subalgebras and homomorphic images, one
/// member per isomorphism type, in discovery order.
pub fn hs_closure(seeds: &[FiniteAlgebra], caps: &Caps) -> Result<Template> {
    let mut members: Vec<TemplateMember> = Vec::new();
    let add = |alg: FiniteAlgebra, origin: String, members: &mut Vec<TemplateMember>| -> Result<bool> {
        let canonical = canonical_form(&alg)?;
        if members.iter().any(|m| m.canonical == canonical) {
            return Ok(false);
        }
        members.push(TemplateMember {
            algebra: alg,
            canonical,
            origin,
        });
        Ok(true)
    };
    for s in seeds {
        add(s.clone(), "seed".into(), &mut members)?;
    }
    let mut next = 0;
    while next < members.len() {
        let alg = members[next].algebra.clone();
        next += 1;
        let subs = enumerate_subuniverses(&alg, true, caps.subuniverse_size)?;
        for s in &subs.subuniverses {
            add(
                subalgebra(&alg, s)?,
                format!("subalgebra {s} of {}", alg.name),
                &mut members,
            )?;
        }
        let cong = congruences(&alg, caps.congruence_size)?;
        for theta in cong.all.iter().filter(|t| !t.is_discrete()) {
            add(
                quotient(&alg, theta)?,
                format!("quotient of {} by {theta}", alg.name),
                &mut members,
            )?;
        }
    }
    Ok(Template { members })
}
