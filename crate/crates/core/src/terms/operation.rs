use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{for_each_tuple, index_tuple, tuple_index, FiniteAlgebra};
use crate::error::{Error, Result};

/// A term in variables x₁..x_k over an algebra's operation symbols.
/// Variables are 0-based internally and print 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermTree {
    Var(usize),
    Op { symbol: String, args: Vec<TermTree> },
}

impl TermTree {
    pub fn op(symbol: impl Into<String>, args: Vec<TermTree>) -> Self {
        TermTree::Op {
            symbol: symbol.into(),
            args,
        }
    }

    /// Checks symbols and arities against `alg` and variables against `arity`.
    pub fn check(&self, alg: &FiniteAlgebra, arity: usize) -> Result<()> {
        match self {
            TermTree::Var(i) if *i < arity => Ok(()),
            TermTree::Var(i) => Err(Error::ArityMismatch(format!(
                "variable x{} in a {arity}-ary term",
                i + 1
            ))),
            TermTree::Op { symbol, args } => {
                let op = alg
                    .op_index(symbol)
                    .ok_or_else(|| Error::ArityMismatch(format!("unknown symbol {symbol}")))?;
                if alg.ops[op].arity != args.len() {
                    return Err(Error::ArityMismatch(format!(
                        "{symbol} has arity {}, applied to {} arguments",
                        alg.ops[op].arity,
                        args.len()
                    )));
                }
                args.iter().try_for_each(|a| a.check(alg, arity))
            }
        }
    }

    fn eval_unchecked(&self, alg: &FiniteAlgebra, args: &[usize]) -> usize {
        match self {
            TermTree::Var(i) => args[*i],
            TermTree::Op { symbol, args: sub } => {
                let op = alg.op_index(symbol).expect("checked");
                let vals: Vec<usize> = sub.iter().map(|s| s.eval_unchecked(alg, args)).collect();
                alg.apply(op, &vals)
            }
        }
    }

    pub fn to_operation(&self, alg: &FiniteAlgebra, arity: usize) -> Result<TermOperation> {
        self.check(alg, arity)?;
        let mut table = Vec::with_capacity(alg.size.pow(arity as u32));
        for_each_tuple(alg.size, arity, |t| table.push(self.eval_unchecked(alg, t) as u8));
        Ok(TermOperation {
            arity,
            size: alg.size,
            table,
            tree: Some(self.clone()),
        })
    }

    /// Replaces each variable x_i by `subs[i]`.
    pub fn substitute(&self, subs: &[TermTree]) -> TermTree {
        match self {
            TermTree::Var(i) => subs[*i].clone(),
            TermTree::Op { symbol, args } => TermTree::Op {
                symbol: symbol.clone(),
                args: args.iter().map(|a| a.substitute(subs)).collect(),
            },
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TermTree::Var(_) => 0,
            TermTree::Op { args, .. } => 1 + args.iter().map(|a| a.depth()).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for TermTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermTree::Var(i) => write!(f, "x{}", i + 1),
            TermTree::Op { symbol, args } => {
                write!(f, "{symbol}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Evaluates a term at a tuple of elements.
pub fn term_apply(alg: &FiniteAlgebra, tree: &TermTree, args: &[usize]) -> Result<usize> {
    tree.check(alg, args.len())?;
    if let Some(&bad) = args.iter().find(|&&a| a >= alg.size) {
        return Err(Error::ArityMismatch(format!("argument {bad} outside {}", alg.name)));
    }
    Ok(tree.eval_unchecked(alg, args))
}

/// A k-ary term operation on an n-element algebra, tabulated row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermOperation {
    pub arity: usize,
    pub size: usize,
    pub table: Vec<u8>,
    pub tree: Option<TermTree>,
}

impl TermOperation {
    pub fn new(arity: usize, size: usize, table: Vec<u8>) -> Result<Self> {
        if table.len() != size.pow(arity as u32) || table.iter().any(|&v| v as usize >= size) {
            return Err(Error::ArityMismatch(format!(
                "table of length {} for a {arity}-ary operation on {size} elements",
                table.len()
            )));
        }
        Ok(TermOperation {
            arity,
            size,
            table,
            tree: None,
        })
    }

    pub fn projection(size: usize, arity: usize, i: usize) -> Self {
        let mut table = Vec::with_capacity(size.pow(arity as u32));
        for_each_tuple(size, arity, |t| table.push(t[i] as u8));
        TermOperation {
            arity,
            size,
            table,
            tree: Some(TermTree::Var(i)),
        }
    }

    /// The basic operation `op` of `alg`.
    pub fn basic(alg: &FiniteAlgebra, op: usize) -> Self {
        let o = &alg.ops[op];
        TermOperation {
            arity: o.arity,
            size: alg.size,
            table: o.table.iter().map(|&v| v as u8).collect(),
            tree: Some(TermTree::op(
                o.symbol.clone(),
                (0..o.arity).map(TermTree::Var).collect(),
            )),
        }
    }

    pub fn with_tree(mut self, tree: TermTree) -> Self {
        self.tree = Some(tree);
        self
    }

    #[inline]
    pub fn value(&self, args: &[usize]) -> usize {
        self.table[tuple_index(self.size, args)] as usize
    }

    #[inline]
    pub fn bin(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y] as usize
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.size).all(|a| self.value(&vec![a; self.arity]) == a)
    }

    pub fn is_cyclic(&self) -> bool {
        is_cyclic_table(self.size, self.arity, &self.table)
    }

    /// Index of the projection this operation equals, if any.
    pub fn projection_index(&self) -> Option<usize> {
        (0..self.arity).find(|&i| *self == TermOperation::projection(self.size, self.arity, i))
    }

    /// Whether the value depends on coordinate `i`.
    pub fn is_essential(&self, i: usize) -> bool {
        let n = self.size;
        let stride = n.pow((self.arity - 1 - i) as u32);
        (0..self.table.len()).any(|idx| {
            let digit = (idx / stride) % n;
            digit + 1 < n && self.table[idx] != self.table[idx + stride]
        })
    }

    pub fn essential_coordinates(&self) -> Vec<usize> {
        (0..self.arity).filter(|&i| self.is_essential(i)).collect()
    }

    /// The operation (x₁..x_m) ↦ self(x_{vars[0]}, …, x_{vars[k-1]}).
    pub fn minor(&self, vars: &[usize], arity: usize) -> TermOperation {
        let mut table = Vec::with_capacity(self.size.pow(arity as u32));
        let mut args = vec![0; self.arity];
        for_each_tuple(self.size, arity, |t| {
            for (a, &v) in args.iter_mut().zip(vars) {
                *a = t[v];
            }
            table.push(self.table[tuple_index(self.size, &args)]);
        });
        let tree = self
            .tree
            .as_ref()
            .map(|tr| tr.substitute(&vars.iter().map(|&v| TermTree::Var(v)).collect::<Vec<_>>()));
        TermOperation {
            arity,
            size: self.size,
            table,
            tree,
        }
    }

    /// self(inner₁, …, inner_k), all inner operations of a common arity.
    pub fn compose(&self, inner: &[&TermOperation]) -> Result<TermOperation> {
        if inner.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "{}-ary operation composed with {} operations",
                self.arity,
                inner.len()
            )));
        }
        let m = inner.first().map_or(0, |g| g.arity);
        if inner.iter().any(|g| g.arity != m || g.size != self.size) {
            return Err(Error::ArityMismatch(
                "inner operations differ in arity or carrier".into(),
            ));
        }
        let len = self.size.pow(m as u32);
        let mut args = vec![0; self.arity];
        let table = (0..len)
            .map(|idx| {
                for (a, g) in args.iter_mut().zip(inner) {
                    *a = g.table[idx] as usize;
                }
                self.table[tuple_index(self.size, &args)]
            })
            .collect();
        let tree = match (
            &self.tree,
            inner.iter().map(|g| g.tree.clone()).collect::<Option<Vec<_>>>(),
        ) {
            (Some(t), Some(subs)) => Some(t.substitute(&subs)),
            _ => None,
        };
        Ok(TermOperation {
            arity: m,
            size: self.size,
            table,
            tree,
        })
    }

    /// The argument tuple at a flat table index.
    pub fn tuple_at(&self, idx: usize) -> Vec<usize> {
        index_tuple(self.size, self.arity, idx)
    }
}

/// Invariance under rotating the arguments.
pub(crate) fn is_cyclic_table(n: usize, k: usize, table: &[u8]) -> bool {
    if k <= 1 {
        return true;
    }
    let top = n.pow((k - 1) as u32);
    (0..table.len()).all(|idx| {
        let first = idx / top;
        let rotated = (idx % top) * n + first;
        table[idx] == table[rotated]
    })
}

/// s ◁ t: (x₁..x_{mn}) ↦ s(t(x₁..x_n), t(x_{n+1}..x_{2n}), …).
pub fn full_composition(s: &TermOperation, t: &TermOperation) -> Result<TermOperation> {
    if s.size != t.size {
        return Err(Error::ArityMismatch(format!(
            "operations on {} and {} elements",
            s.size, t.size
        )));
    }
    let (m, n) = (s.arity, t.arity);
    let arity = m * n;
    let inner: Vec<TermOperation> = (0..m)
        .map(|j| t.minor(&(j * n..(j + 1) * n).collect::<Vec<_>>(), arity))
        .collect();
    let refs: Vec<&TermOperation> = inner.iter().collect();
    s.compose(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn meet_composed_with_itself() {
        let s = catalog::semilattice();
        let meet = TermOperation::basic(&s, 0);
        let c = full_composition(&meet, &meet).unwrap();
        assert_eq!(c.arity, 4);
        for_each_tuple(2, 4, |t| assert_eq!(c.value(t), *t.iter().min().unwrap()));
        assert_eq!(c.tree.unwrap().to_string(), "meet(meet(x1,x2),meet(x3,x4))");
    }

    #[test]
    fn minority_composed_with_itself_is_nine_ary_sum() {
        let z2 = catalog::z2_minority();
        let m = TermOperation::basic(&z2, 0);
        let c = full_composition(&m, &m).unwrap();
        assert_eq!(c.arity, 9);
        for_each_tuple(2, 9, |t| assert_eq!(c.value(t), t.iter().sum::<usize>() % 2));
    }

    #[test]
    fn variable_tree_returns_argument() {
        let a1 = catalog::a1();
        assert_eq!(term_apply(&a1, &TermTree::Var(0), &[3, 1, 2]).unwrap(), 3);
        let bad = TermTree::op("f", vec![TermTree::Var(0)]);
        assert!(matches!(term_apply(&a1, &bad, &[1]), Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn tree_reproduces_table() {
        let a1 = catalog::a1();
        let f = TermOperation::basic(&a1, 0);
        let g = f.minor(&[0, 1, 1], 2);
        assert_eq!(g.tree.as_ref().unwrap().to_operation(&a1, 2).unwrap().table, g.table);
        assert!(f.is_cyclic() && f.is_idempotent());
        assert_eq!(f.essential_coordinates(), vec![0, 1, 2]);
        assert_eq!(TermOperation::projection(4, 3, 1).projection_index(), Some(1));
    }
}
