//! Finite idempotent algebras given by flat operation tables.

mod affine;
mod centralizer;
mod congruence;
mod derive;
mod homomorphism;
mod partition;
mod polynomial;
mod product;
mod relation;
mod subuniverse;
mod validate;

pub use affine::{affine_checks, AffineReport, R3Failure, R3Report};
pub use centralizer::centralizer_condition;
pub use congruence::{
    congruence_lattice, congruences, is_congruence, principal_congruence, principal_congruence_via_polynomials,
    CongruenceReport,
};
pub use derive::{derive_algebra, power, product, quotient, subalgebra, Derivation};
pub use homomorphism::{find_isomorphism, homomorphisms_between, is_homomorphism, Homomorphism};
pub use partition::Partition;
pub use polynomial::{unary_polynomials, PolynomialMonoid};
pub use product::ProductView;
pub use relation::{is_compatible_binary, is_tolerance, link_structure, BinaryRelation, LinkReport};
pub use subuniverse::{enumerate_subuniverses, is_subuniverse, sg_closure, sg_of, SubuniverseList};
pub use validate::{validate_algebra, ValidationIssue, ValidationReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported carrier. Term tables store elements as bytes.
pub const MAX_SIZE: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperationTable {
    pub symbol: String,
    pub arity: usize,
    /// Row-major by argument tuple, leftmost argument most significant.
    pub table: Vec<usize>,
}

impl OperationTable {
    pub fn new(symbol: impl Into<String>, arity: usize, table: Vec<usize>) -> Self {
        OperationTable {
            symbol: symbol.into(),
            arity,
            table,
        }
    }

    /// Tabulates `f` over all argument tuples of `0..n`.
    pub fn from_fn(symbol: impl Into<String>, arity: usize, n: usize, mut f: impl FnMut(&[usize]) -> usize) -> Self {
        let mut table = Vec::with_capacity(n.pow(arity as u32));
        for_each_tuple(n, arity, |t| table.push(f(t)));
        OperationTable::new(symbol, arity, table)
    }
}

/// Position of `args` in a row-major table over `0..n`.
#[inline]
pub fn tuple_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(n: usize, k: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for p in (0..k).rev() {
        t[p] = idx % n;
        idx /= n;
    }
    t
}

/// Visits every tuple in `0..n` of length `k` in lexicographic order.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut t = vec![0usize; k];
    loop {
        f(&t);
        let mut p = k;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            t[p] += 1;
            if t[p] < n {
                break;
            }
            t[p] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAlgebra {
    pub name: String,
    pub size: usize,
    pub ops: Vec<OperationTable>,
}

impl FiniteAlgebra {
    /// Builds an algebra, rejecting malformed or non-idempotent tables.
    pub fn new(name: impl Into<String>, size: usize, ops: Vec<OperationTable>) -> Result<Self> {
        let alg = FiniteAlgebra {
            name: name.into(),
            size,
            ops,
        };
        let report = validate_algebra(&alg);
        if report.is_valid() {
            Ok(alg)
        } else {
            Err(Error::InvalidAlgebra(format!("{}: {}", alg.name, report.issues[0])))
        }
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.ops[op].table[tuple_index(self.size, args)]
    }

    pub fn op_index(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.symbol == symbol)
    }

    pub fn arities(&self) -> Vec<usize> {
        self.ops.iter().map(|o| o.arity).collect()
    }

    /// Sorted (symbol, arity) pairs.
    pub fn signature(&self) -> Vec<(String, usize)> {
        let mut s: Vec<_> = self.ops.iter().map(|o| (o.symbol.clone(), o.arity)).collect();
        s.sort();
        s
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> bool {
        self.signature() == other.signature()
    }

    /// For each operation of `self`, the index of the same symbol in `other`.
    pub fn op_alignment(&self, other: &FiniteAlgebra) -> Result<Vec<usize>> {
        if !self.same_signature(other) {
            return Err(Error::SignatureMismatch(format!(
                "{} has {:?}, {} has {:?}",
                self.name,
                self.signature(),
                other.name,
                other.signature()
            )));
        }
        Ok(self
            .ops
            .iter()
            .map(|o| other.op_index(&o.symbol).expect("signature checked"))
            .collect())
    }

    pub fn all(&self) -> crate::Subset {
        crate::Subset::full(self.size)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_index_is_leftmost_most_significant() {
        assert_eq!(tuple_index(3, &[1, 0, 2]), 9 + 2);
        assert_eq!(index_tuple(3, 3, 11), vec![1, 0, 2]);
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
