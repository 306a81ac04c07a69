use serde::{Deserialize, Serialize};

use super::FiniteAlgebra;
use crate::bitset::Subset;
use crate::closure::for_each_tuple_with_new;
use crate::error::{Error, Result};

/// Least subuniverse containing `seed`.
pub fn sg_closure(alg: &FiniteAlgebra, seed: &Subset) -> Subset {
    let mut member = seed.clone();
    let mut elems: Vec<usize> = seed.iter().collect();
    let mut old = 0;
    while old < elems.len() {
        let cur = elems.len();
        let mut fresh = Vec::new();
        for (op, o) in alg.ops.iter().enumerate() {
            let mut args = vec![0usize; o.arity];
            for_each_tuple_with_new(o.arity, old, cur, |t| {
                for (a, &i) in args.iter_mut().zip(t) {
                    *a = elems[i];
                }
                let v = alg.apply(op, &args);
                if member.insert(v) {
                    fresh.push(v);
                }
                true
            });
        }
        old = cur;
        elems.extend(fresh);
    }
    member
}

pub fn sg_of(alg: &FiniteAlgebra, gens: &[usize]) -> Subset {
    sg_closure(alg, &Subset::from_elems(alg.size, gens.iter().copied()))
}

pub fn is_subuniverse(alg: &FiniteAlgebra, s: &Subset) -> bool {
    sg_closure(alg, s) == *s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubuniverseList {
    /// Nonempty subuniverses in lectic order.
    pub subuniverses: Vec<Subset>,
    /// Whether the proper subuniverses form a connected hypergraph on the carrier.
    pub proper_connected: bool,
}

/// All nonempty subuniverses, by lectic closed-set enumeration.
pub fn enumerate_subuniverses(alg: &FiniteAlgebra, proper_only: bool, cap: usize) -> Result<SubuniverseList> {
    let n = alg.size;
    if n > cap {
        return Err(Error::cap(format!("subuniverse enumeration of {}", alg.name), cap));
    }
    let mut all = Vec::new();
    let mut current = Subset::empty(n);
    loop {
        if !current.is_empty() {
            all.push(current.clone());
        }
        match next_closed(alg, &current) {
            Some(next) => current = next,
            None => break,
        }
    }
    let proper: Vec<Subset> = all.iter().filter(|s| !s.is_full()).cloned().collect();
    let proper_connected = hypergraph_connected(n, &proper);
    let subuniverses = if proper_only { proper } else { all };
    Ok(SubuniverseList {
        subuniverses,
        proper_connected,
    })
}

fn next_closed(alg: &FiniteAlgebra, a: &Subset) -> Option<Subset> {
    let n = alg.size;
    for i in (0..n).rev() {
        if a.contains(i) {
            continue;
        }
        let mut seed = Subset::from_elems(n, a.iter().filter(|&x| x < i));
        seed.insert(i);
        let b = sg_closure(alg, &seed);
        if (0..i).all(|x| b.contains(x) == a.contains(x)) {
            return Some(b);
        }
    }
    None
}

/// Connectivity of the hypergraph on `0..n` whose hyperedges are `edges`.
pub(crate) fn hypergraph_connected(n: usize, edges: &[Subset]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for e in edges {
        let mut it = e.iter();
        if let Some(first) = it.next() {
            for x in it {
                let (a, b) = (find(&mut parent, first), find(&mut parent, x));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let root = find(&mut parent, 0);
    (1..n).all(|x| find(&mut parent, x) == root)
}
