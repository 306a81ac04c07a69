use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitMatrix;
use crate::error::{Error, Result};

/// A partition of `0..n`. Blocks are numbered by their least element, so two
/// equal partitions have identical labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
    blocks: usize,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            blocks: n,
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        Partition {
            labels: vec![0; n],
            blocks: usize::from(n > 0),
        }
    }

    /// Canonicalizes arbitrary block labels.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut labels = Vec::with_capacity(raw.len());
        for &r in raw {
            let next = map.len();
            labels.push(*map.entry(r).or_insert(next));
        }
        Partition {
            blocks: map.len(),
            labels,
        }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n || raw[x] != usize::MAX {
                    return Err(Error::PreconditionViolated(format!(
                        "blocks {blocks:?} do not partition 0..{n}"
                    )));
                }
                raw[x] = b;
            }
        }
        if raw.contains(&usize::MAX) {
            return Err(Error::PreconditionViolated(format!(
                "blocks {blocks:?} do not cover 0..{n}"
            )));
        }
        Ok(Self::from_labels(&raw))
    }

    /// Equivalence relation generated by `pairs`.
    pub fn generated_by(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        uf.partition()
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    #[inline]
    pub fn block_of(&self, x: usize) -> usize {
        self.labels[x]
    }

    #[inline]
    pub fn same(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    pub fn block(&self, label: usize) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.labels[x] == label).collect()
    }

    /// Least element of each block, in block order (ascending).
    pub fn representatives(&self) -> Vec<usize> {
        self.blocks().into_iter().map(|b| b[0]).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks == self.size()
    }

    pub fn is_indiscrete(&self) -> bool {
        self.blocks <= 1
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn le(&self, other: &Partition) -> bool {
        let mut img = vec![usize::MAX; self.blocks];
        for x in 0..self.size() {
            let l = self.labels[x];
            if img[l] == usize::MAX {
                img[l] = other.labels[x];
            } else if img[l] != other.labels[x] {
                return false;
            }
        }
        true
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.size());
        for x in 0..self.size() {
            uf.union(x, self.representative_of(x));
            uf.union(x, other.representative_of(x));
        }
        uf.partition()
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let raw: Vec<usize> = (0..self.size())
            .map(|x| self.labels[x] * other.blocks.max(1) + other.labels[x])
            .collect();
        Partition::from_labels(&raw)
    }

    fn representative_of(&self, x: usize) -> usize {
        self.labels.iter().position(|&l| l == self.labels[x]).unwrap()
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let n = self.size();
        let mut m = BitMatrix::new(n, n);
        for a in 0..n {
            for b in 0..n {
                if self.same(a, b) {
                    m.set(a, b);
                }
            }
        }
        m
    }

    /// Nontrivial pairs (a, b) with a < b in the same block.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut v = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.same(a, b) {
                    v.push((a, b));
                }
            }
        }
        v
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        for (i, b) in blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let s: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", s.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns true if the classes were distinct.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn partition(&mut self) -> Partition {
        let raw: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&[7, 3, 7, 3, 9]);
        assert_eq!(p.labels(), &[0, 1, 0, 1, 2]);
        assert_eq!(p.to_string(), "0,2|1,3|4");
        assert_eq!(p.representatives(), vec![0, 1, 4]);
    }

    #[test]
    fn lattice_operations() {
        let a = Partition::from_blocks(4, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        let b = Partition::from_blocks(4, &[vec![0], vec![1, 2], vec![3]]).unwrap();
        assert_eq!(
            a.join(&b),
            Partition::from_blocks(4, &[vec![0, 1, 2], vec![3]]).unwrap()
        );
        assert!(a.meet(&b).is_discrete());
        assert!(a.le(&a.join(&b)));
        assert!(!a.le(&b));
    }
}
