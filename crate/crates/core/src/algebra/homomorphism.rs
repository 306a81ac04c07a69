use serde::{Deserialize, Serialize};

use super::FiniteAlgebra;
use crate::bitset::Subset;
use crate::closure::for_each_tuple_with_new;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homomorphism {
    pub source: String,
    pub target: String,
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|v| seen.insert(*v))
    }

    pub fn is_surjective(&self, target_size: usize) -> bool {
        Subset::from_elems(target_size, self.map.iter().copied()).is_full()
    }

    pub fn image(&self, s: &Subset, target_size: usize) -> Subset {
        Subset::from_elems(target_size, s.iter().map(|x| self.map[x]))
    }

    pub fn preimage(&self, d: &Subset) -> Subset {
        Subset::from_elems(self.map.len(), (0..self.map.len()).filter(|&x| d.contains(self.map[x])))
    }
}

pub fn is_homomorphism(src: &FiniteAlgebra, dst: &FiniteAlgebra, map: &[usize]) -> Result<bool> {
    let align = src.op_alignment(dst)?;
    if map.len() != src.size || map.iter().any(|&v| v >= dst.size) {
        return Ok(false);
    }
    let mut ok = true;
    let mut img = Vec::new();
    for (op, o) in src.ops.iter().enumerate() {
        super::for_each_tuple(src.size, o.arity, |t| {
            if ok {
                img.clear();
                img.extend(t.iter().map(|&x| map[x]));
                ok = map[src.apply(op, t)] == dst.apply(align[op], &img);
            }
        });
    }
    Ok(ok)
}

struct Search<'a> {
    src: &'a FiniteAlgebra,
    dst: &'a FiniteAlgebra,
    align: Vec<usize>,
    injective: bool,
    first_only: bool,
    nodes: u128,
    cap: u128,
    found: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct State {
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    order: Vec<usize>,
}

impl Search<'_> {
    /// Extends the partial map to everything generated by its domain.
    fn propagate(&self, st: &mut State, mut old: usize) -> bool {
        let mut args = Vec::new();
        let mut img = Vec::new();
        while old < st.order.len() {
            let cur = st.order.len();
            for (op, o) in self.src.ops.iter().enumerate() {
                let mut pending = Vec::new();
                let ok = for_each_tuple_with_new(o.arity, old, cur, |t| {
                    args.clear();
                    args.extend(t.iter().map(|&i| st.order[i]));
                    img.clear();
                    img.extend(args.iter().map(|&x| st.map[x].expect("assigned")));
                    let x = self.src.apply(op, &args);
                    let y = self.dst.apply(self.align[op], &img);
                    match st.map[x] {
                        Some(v) => v == y,
                        None => {
                            if self.injective && st.used[y] {
                                return false;
                            }
                            st.map[x] = Some(y);
                            st.used[y] = true;
                            pending.push(x);
                            true
                        }
                    }
                });
                st.order.extend(pending);
                if !ok {
                    return false;
                }
            }
            old = cur;
        }
        true
    }

    fn run(&mut self, st: State) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::LimitExceeded {
                space: self.nodes,
                limit: self.cap,
            });
        }
        let Some(x) = st.map.iter().position(|v| v.is_none()) else {
            self.found.push(st.map.iter().map(|v| v.unwrap()).collect());
            return Ok(());
        };
        for y in 0..self.dst.size {
            if self.injective && st.used[y] {
                continue;
            }
            let mut next = st.clone();
            next.map[x] = Some(y);
            next.used[y] = true;
            let old = next.order.len();
            next.order.push(x);
            if self.propagate(&mut next, old) {
                self.run(next)?;
                if self.first_only && !self.found.is_empty() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

fn search(
    src: &FiniteAlgebra,
    dst: &FiniteAlgebra,
    injective: bool,
    first_only: bool,
    cap: u128,
) -> Result<Vec<Vec<usize>>> {
    let align = src.op_alignment(dst)?;
    let mut s = Search {
        src,
        dst,
        align,
        injective,
        first_only,
        nodes: 0,
        cap,
        found: Vec::new(),
    };
    let st = State {
        map: vec![None; src.size],
        used: vec![false; dst.size],
        order: Vec::new(),
    };
    s.run(st).map_err(|e| match e {
        Error::LimitExceeded { limit, .. } => Error::CapExceeded {
            what: format!("homomorphism search {} -> {}", src.name, dst.name),
            limit: limit.min(usize::MAX as u128) as usize,
        },
        other => other,
    })?;
    Ok(s.found)
}

/// All homomorphisms, in lexicographic order of their value vectors.
/// `node_cap` bounds the number of search nodes.
pub fn homomorphisms_between(src: &FiniteAlgebra, dst: &FiniteAlgebra, node_cap: u128) -> Result<Vec<Homomorphism>> {
    let mut maps = search(src, dst, false, false, node_cap)?;
    maps.sort();
    Ok(maps
        .into_iter()
        .map(|map| Homomorphism {
            source: src.name.clone(),
            target: dst.name.clone(),
            map,
        })
        .collect())
}

pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, node_cap: u128) -> Result<Option<Homomorphism>> {
    if a.size != b.size || !a.same_signature(b) {
        return Ok(None);
    }
    Ok(search(a, b, true, true, node_cap)?.pop().map(|map| Homomorphism {
        source: a.name.clone(),
        target: b.name.clone(),
        map,
    }))
}
