use serde::{Deserialize, Serialize};

use super::free::{free_algebra, free_closure};
use super::operation::TermOperation;
use super::taylor::is_majority;
use crate::algebra::{is_subuniverse, subalgebra, FiniteAlgebra};
use crate::bitset::Subset;
use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalStructure {
    pub has_majority_term: bool,
    /// A majority term operation of the induced subalgebra, on its own numbering.
    pub majority_witness: Option<TermOperation>,
    /// Ordered pairs (a, b) in B such that {a, b} is a subuniverse on which
    /// some binary term is the semilattice operation with absorbing element b.
    pub semilattice_pairs: Vec<(usize, usize)>,
}

/// Whether some binary term acts on the subuniverse {a, b} as the
/// semilattice operation with absorbing element b.
pub fn semilattice_towards(alg: &FiniteAlgebra, a: usize, b: usize, cap: usize) -> Result<bool> {
    let pair = Subset::from_elems(alg.size, [a, b]);
    if a == b || !is_subuniverse(alg, &pair) {
        return Ok(false);
    }
    let sub = subalgebra(alg, &pair)?;
    let f2 = free_algebra(&sub, 2, cap);
    if !f2.complete {
        return Err(Error::cap(format!("F(2) of {}", sub.name), cap));
    }
    let (la, lb) = if a < b { (0, 1) } else { (1, 0) };
    Ok((0..f2.len()).any(|i| {
        let t = f2.operation(i);
        t.bin(la, lb) == lb && t.bin(lb, la) == lb
    }))
}

pub fn local_structure(alg: &FiniteAlgebra, b: &Subset, caps: &Caps) -> Result<LocalStructure> {
    let sub = subalgebra(alg, b)?;
    let (f3, hit) = free_closure(&[&sub], 3, caps.closure, |t| {
        is_majority(&TermOperation {
            arity: 3,
            size: sub.size,
            table: t.to_vec(),
            tree: None,
        })
    })?;
    if hit.is_none() && !f3.complete {
        return Err(Error::cap(format!("F(3) of {}", sub.name), caps.closure));
    }
    let majority_witness = hit.map(|i| f3.operation(i));
    let elems = b.to_vec();
    let mut semilattice_pairs = Vec::new();
    for &x in &elems {
        for &y in &elems {
            if semilattice_towards(alg, x, y, caps.closure)? {
                semilattice_pairs.push((x, y));
            }
        }
    }
    Ok(LocalStructure {
        has_majority_term: majority_witness.is_some(),
        majority_witness,
        semilattice_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn majority_algebra_has_majority_term() {
        let m = catalog::majority();
        let l = local_structure(&m, &m.all(), &Caps::default()).unwrap();
        assert!(l.has_majority_term);
        assert!(l.semilattice_pairs.is_empty());
    }

    #[test]
    fn a1_pairs_with_zero_are_semilattices() {
        let a1 = catalog::a1();
        for x in 1..4 {
            let l = local_structure(&a1, &Subset::from_elems(4, [0, x]), &Caps::default()).unwrap();
            assert_eq!(l.semilattice_pairs, vec![(x, 0)]);
        }
    }

    #[test]
    fn z2_has_neither() {
        let z = catalog::z2_minority();
        let l = local_structure(&z, &z.all(), &Caps::default()).unwrap();
        assert!(!l.has_majority_term);
        assert!(l.semilattice_pairs.is_empty());
    }
}
