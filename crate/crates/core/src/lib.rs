//! Finite idempotent algebras, their colored edge digraphs, absorption, and
//! consistent-map reductions of multisorted CSP instances.

pub mod absorption;
pub mod algebra;
pub mod bitset;
pub mod caps;
pub mod catalog;
pub mod closure;
pub mod csp;
pub mod edges;
pub mod error;
pub mod terms;

pub use algebra::{FiniteAlgebra, OperationTable, Partition};
pub use bitset::{BitMatrix, Subset};
pub use caps::Caps;
pub use error::{Error, Result};

/// Three-valued answer for searches that may be cut short by a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    /// Kleene conjunction: a definite No wins over Unknown.
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}
