use serde::{Deserialize, Serialize};

/// Resource limits. Exceeding one is reported, never silently truncated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of elements produced by a single closure computation.
    pub closure: usize,
    /// Largest algebra for which all subuniverses are enumerated.
    pub subuniverse_size: usize,
    /// Largest algebra for which the congruence set is computed.
    pub congruence_size: usize,
    /// Largest algebra for which every subset is classified.
    pub subset_size: usize,
    /// Bound on brute-force search spaces (assignments, homomorphism nodes).
    pub search_space: u128,
    /// Highest arity used for projectivity checks.
    pub projectivity_arity: usize,
    /// Largest product |A||B| whose subuniverses are enumerated exhaustively.
    pub relational_product: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            closure: 20_000,
            subuniverse_size: 8,
            congruence_size: 10,
            subset_size: 6,
            search_space: 1_000_000,
            projectivity_arity: 3,
            relational_product: 16,
        }
    }
}
