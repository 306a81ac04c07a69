use serde::{Deserialize, Serialize};

use super::{FiniteAlgebra, Partition, ProductView};
use crate::bitset::{BitMatrix, Subset};
use crate::error::{Error, Result};

/// A relation R ⊆ A × B as a bit matrix with rows indexed by A.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryRelation {
    pub matrix: BitMatrix,
}

impl BinaryRelation {
    pub fn empty(rows: usize, cols: usize) -> Self {
        BinaryRelation {
            matrix: BitMatrix::new(rows, cols),
        }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        BinaryRelation {
            matrix: BitMatrix::full(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        BinaryRelation {
            matrix: BitMatrix::identity(n),
        }
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut matrix = BitMatrix::new(rows, cols);
        for (a, b) in pairs {
            matrix.set(a, b);
        }
        BinaryRelation { matrix }
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.matrix.get(a, b)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.matrix.pairs().collect()
    }

    /// [a]R, the right neighbours of a.
    pub fn right_neighbors(&self, a: usize) -> Subset {
        self.matrix.row(a).clone()
    }

    /// R[b], the left neighbours of b.
    pub fn left_neighbors(&self, b: usize) -> Subset {
        self.matrix.column(b)
    }

    pub fn transpose(&self) -> Self {
        BinaryRelation {
            matrix: self.matrix.transpose(),
        }
    }

    pub fn is_reflexive(&self) -> bool {
        self.rows() == self.cols() && (0..self.rows()).all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    pub fn is_subdirect(&self) -> bool {
        (0..self.rows()).all(|a| !self.matrix.row(a).is_empty())
            && (0..self.cols()).all(|b| !self.matrix.column(b).is_empty())
    }
}

/// Whether R is a subuniverse of A × B.
pub fn is_compatible_binary(a: &FiniteAlgebra, b: &FiniteAlgebra, r: &BinaryRelation) -> Result<bool> {
    if r.rows() != a.size || r.cols() != b.size {
        return Err(Error::PreconditionViolated(format!(
            "relation is {}x{}, algebras have sizes {} and {}",
            r.rows(),
            r.cols(),
            a.size,
            b.size
        )));
    }
    let view = ProductView::new(&[a, b])?;
    let set: Vec<Vec<usize>> = r.pairs().into_iter().map(|(x, y)| vec![x, y]).collect();
    Ok(view.is_closed(&set))
}

/// Reflexive, symmetric and compatible.
pub fn is_tolerance(alg: &FiniteAlgebra, r: &BinaryRelation) -> Result<bool> {
    Ok(r.is_reflexive() && r.is_symmetric() && is_compatible_binary(alg, alg, r)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    /// 1 or 2.
    pub coordinate: usize,
    pub tolerance: BinaryRelation,
    pub link: Partition,
    /// The link congruence is the full relation.
    pub connected: bool,
    /// The tolerance is the full relation.
    pub tolerance_full: bool,
    /// Some element of the other side related to everything on this side.
    pub full_neighbor: Option<usize>,
}

/// Link tolerance and link congruence of a subdirect R on coordinate 1 or 2.
pub fn link_structure(r: &BinaryRelation, coordinate: usize) -> Result<LinkReport> {
    if !r.is_subdirect() {
        return Err(Error::NotSubdirect(format!(
            "{}x{} relation with {} pairs",
            r.rows(),
            r.cols(),
            r.matrix.count()
        )));
    }
    let oriented = match coordinate {
        1 => r.clone(),
        2 => r.transpose(),
        _ => {
            return Err(Error::PreconditionViolated(format!(
                "coordinate {coordinate} of a binary relation"
            )))
        }
    };
    let n = oriented.rows();
    let mut tol = BinaryRelation::empty(n, n);
    for b in 0..oriented.cols() {
        let col = oriented.left_neighbors(b);
        for x in col.iter() {
            for y in col.iter() {
                tol.matrix.set(x, y);
            }
        }
    }
    let link = Partition::generated_by(n, tol.pairs());
    let full_neighbor = (0..oriented.cols()).find(|&b| oriented.left_neighbors(b).is_full());
    Ok(LinkReport {
        coordinate,
        tolerance_full: tol.matrix.count() == n * n,
        connected: link.is_indiscrete(),
        link,
        tolerance: tol,
        full_neighbor,
    })
}
