use std::collections::HashMap;

use super::operation::{TermOperation, TermTree};
use crate::algebra::{for_each_tuple, FiniteAlgebra};
use crate::closure::{close, Origin};
use crate::error::Result;

/// The k-generated free algebra of the variety of a family of algebras with a
/// common signature, realized as the k-ary term operations of the family.
/// A term operation is stored as the concatenation of its tables on each
/// member of the family.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub base: Vec<String>,
    pub sizes: Vec<usize>,
    pub generators: usize,
    /// Ascending. Each entry concatenates the tables on every family member.
    pub elements: Vec<Vec<u8>>,
    /// How each element arose; `Op` arguments index `elements`.
    pub origins: Vec<Origin>,
    symbols: Vec<String>,
    index: HashMap<Vec<u8>, usize>,
    /// False if the closure hit its cap or was stopped early.
    pub complete: bool,
}

impl FreeAlgebra {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Start of member `j`'s table inside an element.
    pub fn offset(&self, j: usize) -> usize {
        self.sizes[..j].iter().map(|n| n.pow(self.generators as u32)).sum()
    }

    pub fn index_of(&self, table: &[u8]) -> Option<usize> {
        self.index.get(table).copied()
    }

    /// Element `i` as a term operation on family member `j`.
    pub fn operation_on(&self, i: usize, j: usize) -> TermOperation {
        let start = self.offset(j);
        let len = self.sizes[j].pow(self.generators as u32);
        TermOperation {
            arity: self.generators,
            size: self.sizes[j],
            table: self.elements[i][start..start + len].to_vec(),
            tree: Some(self.tree(i)),
        }
    }

    /// Element `i` on the first family member.
    pub fn operation(&self, i: usize) -> TermOperation {
        self.operation_on(i, 0)
    }

    pub fn operations(&self) -> Vec<TermOperation> {
        (0..self.len()).map(|i| self.operation(i)).collect()
    }

    /// A term producing element `i`.
    pub fn tree(&self, i: usize) -> TermTree {
        match &self.origins[i] {
            Origin::Seed(v) => TermTree::Var(*v),
            Origin::Op { op, args } => {
                TermTree::op(self.symbols[*op].clone(), args.iter().map(|&a| self.tree(a)).collect())
            }
        }
    }

    /// Index of the projection onto variable `v`.
    pub fn projection(&self, v: usize) -> usize {
        self.origins
            .iter()
            .position(|o| *o == Origin::Seed(v))
            .or_else(|| {
                let p = family_projection(&self.sizes, self.generators, v);
                self.index_of(&p)
            })
            .expect("projections are seeds")
    }
}

pub(crate) fn family_projection(sizes: &[usize], k: usize, v: usize) -> Vec<u8> {
    let mut table = Vec::new();
    for &n in sizes {
        for_each_tuple(n, k, |t| table.push(t[v] as u8));
    }
    table
}

/// Closure of the projections; `stop` may end it at the first element it accepts.
/// Returns the free algebra and the element that triggered `stop`.
pub(crate) fn free_closure(
    algs: &[&FiniteAlgebra],
    k: usize,
    cap: usize,
    mut stop: impl FnMut(&[u8]) -> bool,
) -> Result<(FreeAlgebra, Option<usize>)> {
    let first = algs[0];
    let align = algs.iter().map(|a| first.op_alignment(a)).collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = algs.iter().map(|a| a.size).collect();
    let blocks: Vec<(usize, usize)> = {
        let mut off = 0;
        sizes
            .iter()
            .map(|&n| {
                let len = n.pow(k as u32);
                let b = (off, len);
                off += len;
                b
            })
            .collect()
    };
    let seeds: Vec<Vec<u8>> = (0..k).map(|v| family_projection(&sizes, k, v)).collect();
    let arities = first.arities();
    let mut hit: Option<Vec<u8>> = None;
    let closed = close(
        seeds,
        &arities,
        cap,
        |op, args: &[&Vec<u8>]| {
            let mut out = Vec::with_capacity(args[0].len());
            for (j, &(off, len)) in blocks.iter().enumerate() {
                let alg = algs[j];
                let o = &alg.ops[align[j][op]];
                let n = alg.size;
                for pos in off..off + len {
                    let idx = args.iter().fold(0usize, |acc, t| acc * n + t[pos] as usize);
                    out.push(o.table[idx] as u8);
                }
            }
            out
        },
        |t| {
            if stop(t) {
                hit = Some(t.clone());
                true
            } else {
                false
            }
        },
    );
    let mut order: Vec<usize> = (0..closed.elems.len()).collect();
    order.sort_by(|&x, &y| closed.elems[x].cmp(&closed.elems[y]));
    let mut rank = vec![0; order.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let origins = order
        .iter()
        .map(|&i| match &closed.origins[i] {
            Origin::Seed(v) => Origin::Seed(*v),
            Origin::Op { op, args } => Origin::Op {
                op: *op,
                args: args.iter().map(|&a| rank[a]).collect(),
            },
        })
        .collect();
    let mut elems = closed.elems;
    let elements: Vec<Vec<u8>> = order.iter().map(|&i| std::mem::take(&mut elems[i])).collect();
    let index: HashMap<Vec<u8>, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let hit = hit.map(|t| index[&t]);
    Ok((
        FreeAlgebra {
            base: algs.iter().map(|a| a.name.clone()).collect(),
            sizes,
            generators: k,
            elements,
            origins,
            symbols: first.ops.iter().map(|o| o.symbol.clone()).collect(),
            index,
            complete: closed.complete,
        },
        hit,
    ))
}

/// F(k) of a single algebra. An incomplete result has `complete == false`.
pub fn free_algebra(alg: &FiniteAlgebra, k: usize, cap: usize) -> FreeAlgebra {
    free_closure(&[alg], k, cap, |_| false)
        .expect("one algebra has one signature")
        .0
}

/// F(k) of the variety generated by algebras sharing a signature.
pub fn free_algebra_family(algs: &[&FiniteAlgebra], k: usize, cap: usize) -> Result<FreeAlgebra> {
    Ok(free_closure(algs, k, cap, |_| false)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn small_free_algebras() {
        assert_eq!(free_algebra(&catalog::z2_minority(), 2, 100).len(), 2);
        let sl = free_algebra(&catalog::semilattice(), 2, 100);
        assert_eq!(sl.len(), 3);
        assert!(sl.complete);
        assert_eq!(free_algebra(&catalog::a1(), 1, 100).len(), 1);
    }

    #[test]
    fn provenance_trees_reproduce_tables() {
        let a1 = catalog::a1();
        let f = free_algebra(&a1, 2, 1000);
        for i in 0..f.len() {
            let op = f.operation(i);
            let replay = op.tree.as_ref().unwrap().to_operation(&a1, 2).unwrap();
            assert_eq!(replay.table, op.table);
        }
    }

    #[test]
    fn family_tables_concatenate() {
        let (a, b) = (catalog::a1(), catalog::trivial("f", 3));
        let f = free_algebra_family(&[&a, &b], 2, 1000).unwrap();
        assert_eq!(f.elements[0].len(), 16 + 1);
        assert_eq!(f.len(), free_algebra(&a, 2, 1000).len());
    }

    #[test]
    fn cap_marks_incomplete() {
        let f = free_algebra(&catalog::semilattice(), 3, 4);
        assert!(!f.complete);
        assert_eq!(f.len(), 4);
    }
}
