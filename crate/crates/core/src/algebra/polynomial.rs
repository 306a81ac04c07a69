use std::collections::HashSet;

use super::FiniteAlgebra;
use crate::closure::close_all;
use crate::error::{Error, Result};

/// The unary polynomial operations of an algebra, as value vectors.
#[derive(Clone, Debug)]
pub struct PolynomialMonoid {
    pub size: usize,
    /// Sorted lexicographically.
    pub maps: Vec<Vec<usize>>,
    index: HashSet<Vec<usize>>,
}

impl PolynomialMonoid {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn contains(&self, map: &[usize]) -> bool {
        self.index.contains(map)
    }

    /// Idempotent members, i.e. polynomial retractions.
    pub fn retractions(&self) -> impl Iterator<Item = &Vec<usize>> + '_ {
        self.maps.iter().filter(|p| p.iter().all(|&x| p[x] == x))
    }
}

/// Closes the identity map and all constant maps under pointwise basic
/// operations.
pub fn unary_polynomials(alg: &FiniteAlgebra, cap: usize) -> Result<PolynomialMonoid> {
    let n = alg.size;
    let mut seeds: Vec<Vec<usize>> = vec![(0..n).collect()];
    seeds.extend((0..n).map(|c| vec![c; n]));
    let arities = alg.arities();
    let mut args = Vec::new();
    let closed = close_all(seeds, &arities, cap, |op, maps: &[&Vec<usize>]| {
        (0..n)
            .map(|x| {
                args.clear();
                args.extend(maps.iter().map(|m| m[x]));
                alg.apply(op, &args)
            })
            .collect()
    });
    if !closed.complete {
        return Err(Error::cap(format!("unary polynomials of {}", alg.name), cap));
    }
    let mut maps = closed.elems;
    maps.sort();
    let index = maps.iter().cloned().collect();
    Ok(PolynomialMonoid { size: n, maps, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn z2_polynomials_are_affine_maps() {
        let p = unary_polynomials(&catalog::z2_minority(), 100).unwrap();
        assert_eq!(p.maps, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn semilattice_polynomials() {
        let p = unary_polynomials(&catalog::semilattice(), 100).unwrap();
        assert_eq!(p.maps, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(p.retractions().count(), 3);
    }
}
