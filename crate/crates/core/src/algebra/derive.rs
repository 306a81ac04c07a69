use serde::{Deserialize, Serialize};

use super::{is_congruence, is_subuniverse, FiniteAlgebra, OperationTable, Partition};
use crate::bitset::Subset;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivation {
    Subalgebra(Subset),
    Quotient(Partition),
    Product(FiniteAlgebra),
    Power(usize),
}

pub fn derive_algebra(alg: &FiniteAlgebra, derivation: &Derivation) -> Result<FiniteAlgebra> {
    match derivation {
        Derivation::Subalgebra(s) => subalgebra(alg, s),
        Derivation::Quotient(p) => quotient(alg, p),
        Derivation::Product(b) => product(alg, b),
        Derivation::Power(k) => power(alg, *k),
    }
}

/// Induced subalgebra on a closed subset. Element i is the i-th smallest member.
pub fn subalgebra(alg: &FiniteAlgebra, s: &Subset) -> Result<FiniteAlgebra> {
    if s.universe() != alg.size || s.is_empty() || !is_subuniverse(alg, s) {
        return Err(Error::NotClosed(format!("{s} in {}", alg.name)));
    }
    let elems = s.to_vec();
    let mut pos = vec![usize::MAX; alg.size];
    for (i, &e) in elems.iter().enumerate() {
        pos[e] = i;
    }
    let m = elems.len();
    let mut args = Vec::new();
    let ops = alg
        .ops
        .iter()
        .enumerate()
        .map(|(op, o)| {
            OperationTable::from_fn(o.symbol.clone(), o.arity, m, |t| {
                args.clear();
                args.extend(t.iter().map(|&i| elems[i]));
                pos[alg.apply(op, &args)]
            })
        })
        .collect();
    FiniteAlgebra::new(format!("{}{}", alg.name, s), m, ops)
}

/// Quotient by a congruence. Blocks are numbered by their least elements.
pub fn quotient(alg: &FiniteAlgebra, theta: &Partition) -> Result<FiniteAlgebra> {
    if !is_congruence(alg, theta) {
        return Err(Error::NotACongruence(format!("{theta} on {}", alg.name)));
    }
    let reps = theta.representatives();
    let m = reps.len();
    let mut args = Vec::new();
    let ops = alg
        .ops
        .iter()
        .enumerate()
        .map(|(op, o)| {
            OperationTable::from_fn(o.symbol.clone(), o.arity, m, |t| {
                args.clear();
                args.extend(t.iter().map(|&i| reps[i]));
                theta.block_of(alg.apply(op, &args))
            })
        })
        .collect();
    FiniteAlgebra::new(format!("{}/{}", alg.name, theta), m, ops)
}

/// A × B with (x, y) numbered x·|B| + y.
pub fn product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let align = a.op_alignment(b)?;
    let nb = b.size;
    let m = a.size * nb;
    if m > super::MAX_SIZE {
        return Err(Error::InvalidAlgebra(format!(
            "{} x {} has {m} elements",
            a.name, b.name
        )));
    }
    let (mut xa, mut xb) = (Vec::new(), Vec::new());
    let ops = a
        .ops
        .iter()
        .enumerate()
        .map(|(op, o)| {
            OperationTable::from_fn(o.symbol.clone(), o.arity, m, |t| {
                xa.clear();
                xb.clear();
                for &e in t {
                    xa.push(e / nb);
                    xb.push(e % nb);
                }
                a.apply(op, &xa) * nb + b.apply(align[op], &xb)
            })
        })
        .collect();
    FiniteAlgebra::new(format!("{}x{}", a.name, b.name), m, ops)
}

/// A^k with tuples numbered lexicographically.
pub fn power(alg: &FiniteAlgebra, k: usize) -> Result<FiniteAlgebra> {
    if k == 0 {
        return Err(Error::PreconditionViolated("power with exponent 0".into()));
    }
    let mut acc = alg.clone();
    for _ in 1..k {
        acc = product(&acc, alg)?;
    }
    Ok(acc.with_name(format!("{}^{k}", alg.name)))
}
