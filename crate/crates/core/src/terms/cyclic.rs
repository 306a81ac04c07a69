use serde::{Deserialize, Serialize};

use super::free::{free_closure, FreeAlgebra};
use super::operation::{is_cyclic_table, TermOperation};
use crate::algebra::FiniteAlgebra;
use crate::error::Result;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclicSearch {
    pub arity: usize,
    /// Ascending by table.
    pub operations: Vec<TermOperation>,
    /// True when F(p) was closed completely, so `operations` lists all of them.
    pub complete: bool,
}

/// Cyclic on every member of the family.
pub(crate) fn is_cyclic_family(sizes: &[usize], k: usize, table: &[u8]) -> bool {
    let mut off = 0;
    sizes.iter().all(|&n| {
        let len = n.pow(k as u32);
        let ok = is_cyclic_table(n, k, &table[off..off + len]);
        off += len;
        ok
    })
}

/// F(p) of a family and the indices of its cyclic elements. With
/// `first_only` the closure stops at the first cyclic element.
pub(crate) fn family_cyclic(
    algs: &[&FiniteAlgebra],
    p: usize,
    cap: usize,
    first_only: bool,
) -> Result<(FreeAlgebra, Vec<usize>)> {
    let sizes: Vec<usize> = algs.iter().map(|a| a.size).collect();
    let (free, hit) = free_closure(algs, p, cap, |t| first_only && is_cyclic_family(&sizes, p, t))?;
    let found = match hit {
        Some(i) => vec![i],
        None => (0..free.len())
            .filter(|&i| is_cyclic_family(&sizes, p, &free.elements[i]))
            .collect(),
    };
    Ok((free, found))
}

/// The p-ary cyclic term operations of `alg`.
pub fn cyclic_operations(alg: &FiniteAlgebra, p: usize, cap: usize, first_only: bool) -> CyclicSearch {
    let (free, found) = family_cyclic(&[alg], p, cap, first_only).expect("one algebra has one signature");
    CyclicSearch {
        arity: p,
        operations: found.into_iter().map(|i| free.operation(i)).collect(),
        complete: free.complete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::for_each_tuple;
    use crate::catalog;

    fn only(alg: &FiniteAlgebra) -> TermOperation {
        let s = cyclic_operations(alg, 3, 10_000, false);
        assert!(s.complete);
        assert_eq!(s.operations.len(), 1);
        s.operations.into_iter().next().unwrap()
    }

    #[test]
    fn two_element_ternary_cyclic_terms() {
        let m = only(&catalog::semilattice());
        for_each_tuple(2, 3, |t| assert_eq!(m.value(t), *t.iter().min().unwrap()));
        let s = only(&catalog::z2_minority());
        for_each_tuple(2, 3, |t| assert_eq!(s.value(t), t.iter().sum::<usize>() % 2));
        let j = only(&catalog::majority());
        for_each_tuple(2, 3, |t| {
            assert_eq!(j.value(t), usize::from(t.iter().sum::<usize>() >= 2))
        });
    }

    #[test]
    fn early_exit_returns_one_witness() {
        let s = cyclic_operations(&catalog::a1(), 3, 10_000, true);
        assert_eq!(s.operations.len(), 1);
        assert!(s.operations[0].is_cyclic());
    }
}
