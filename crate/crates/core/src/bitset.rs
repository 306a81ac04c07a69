use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of `0..len` stored as packed 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subset {
    len: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(len: usize) -> Self {
        Subset {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_elems(len: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for e in elems {
            s.insert(e);
        }
        s
    }

    /// Size of the ambient set.
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Inserts `i`; returns true if it was not present.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "element {i} outside 0..{}", self.len);
        let w = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1u64 << (i % 64));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Subset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Subset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn complement(&self) -> Subset {
        let mut c = Subset::full(self.len);
        for (a, b) in c.words.iter_mut().zip(&self.words) {
            *a &= !b;
        }
        c
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Square or rectangular bit matrix; row `i` is the set of `j` with `(i, j)` present.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitMatrix {
    rows: Vec<Subset>,
    cols: usize,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![Subset::empty(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![Subset::full(cols); rows],
            cols,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i].insert(j);
    }

    pub fn clear(&mut self, i: usize, j: usize) {
        self.rows[i].remove(j);
    }

    pub fn row(&self, i: usize) -> &Subset {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> Subset {
        Subset::from_elems(self.rows.len(), (0..self.rows.len()).filter(|&i| self.get(i, j)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(Subset::count).sum()
    }

    pub fn intersection(&self, other: &BitMatrix) -> BitMatrix {
        let mut m = self.clone();
        for (a, b) in m.rows.iter_mut().zip(&other.rows) {
            a.intersect_with(b);
        }
        m
    }

    pub fn union(&self, other: &BitMatrix) -> BitMatrix {
        let mut m = self.clone();
        for (a, b) in m.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
        m
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.cols, self.rows.len());
        for (i, j) in self.pairs() {
            t.set(j, i);
        }
        t
    }

    pub fn is_subset(&self, other: &BitMatrix) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    /// Reflexive-transitive closure of a square matrix (Warshall, row-at-a-time).
    pub fn reflexive_transitive_closure(&self) -> BitMatrix {
        let n = self.rows.len();
        let mut m = self.clone();
        for i in 0..n {
            m.set(i, i);
        }
        for k in 0..n {
            let rk = m.rows[k].clone();
            for i in 0..n {
                if m.rows[i].contains(k) {
                    m.rows[i].union_with(&rk);
                }
            }
        }
        m
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_basics() {
        let mut s = Subset::empty(70);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(65);
        assert_eq!(s.to_vec(), vec![3, 65]);
        assert_eq!(s.complement().count(), 68);
        assert_eq!(s.to_string(), "{3,65}");
    }

    #[test]
    fn warshall_closure() {
        let mut m = BitMatrix::new(4, 4);
        m.set(0, 1);
        m.set(1, 2);
        let c = m.reflexive_transitive_closure();
        assert!(c.get(0, 2));
        assert!(c.get(3, 3));
        assert!(!c.get(2, 0));
    }
}
