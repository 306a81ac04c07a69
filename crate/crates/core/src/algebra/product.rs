use std::collections::HashSet;

use super::FiniteAlgebra;
use crate::closure::{close, Closed};
use crate::error::{Error, Result};

/// A product of algebras with a common signature, with elements as tuples.
/// The product is never tabulated.
#[derive(Clone, Debug)]
pub struct ProductView<'a> {
    factors: Vec<&'a FiniteAlgebra>,
    /// `align[i][op]` is the index in factor `i` of operation `op` of factor 0.
    align: Vec<Vec<usize>>,
    arities: Vec<usize>,
}

impl<'a> ProductView<'a> {
    pub fn new(factors: &[&'a FiniteAlgebra]) -> Result<Self> {
        let first = *factors
            .first()
            .ok_or_else(|| Error::PreconditionViolated("empty product".into()))?;
        let align = factors
            .iter()
            .map(|f| first.op_alignment(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductView {
            factors: factors.to_vec(),
            align,
            arities: first.arities(),
        })
    }

    pub fn power(alg: &'a FiniteAlgebra, k: usize) -> Self {
        ProductView::new(&vec![alg; k]).expect("a power has one signature")
    }

    pub fn factors(&self) -> &[&'a FiniteAlgebra] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    /// Number of tuples, saturating.
    pub fn cardinality(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(f.size as u128))
    }

    /// Operation `op` (indexed as in factor 0) applied coordinatewise.
    pub fn apply(&self, op: usize, args: &[&Vec<usize>]) -> Vec<usize> {
        let mut buf = Vec::with_capacity(args.len());
        (0..self.dim())
            .map(|i| {
                buf.clear();
                buf.extend(args.iter().map(|t| t[i]));
                self.factors[i].apply(self.align[i][op], &buf)
            })
            .collect()
    }

    /// Subuniverse generated by `gens`.
    pub fn sg(&self, gens: impl IntoIterator<Item = Vec<usize>>, cap: usize) -> Closed<Vec<usize>> {
        close(gens, &self.arities, cap, |op, args| self.apply(op, args), |_| false)
    }

    /// Subuniverse generated by `gens`, stopping as soon as `stop` accepts a tuple.
    pub fn sg_until(
        &self,
        gens: impl IntoIterator<Item = Vec<usize>>,
        cap: usize,
        stop: impl FnMut(&Vec<usize>) -> bool,
    ) -> Closed<Vec<usize>> {
        close(gens, &self.arities, cap, |op, args| self.apply(op, args), stop)
    }

    pub fn is_closed(&self, set: &[Vec<usize>]) -> bool {
        let members: HashSet<&Vec<usize>> = set.iter().collect();
        let c = self.sg_until(set.iter().cloned(), usize::MAX, |t| !members.contains(t));
        c.complete
    }
}
