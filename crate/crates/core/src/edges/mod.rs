//! Colored edge digraphs, their strong components, and checks of the Edge
//! Axioms and their structural consequences.

mod axioms;
mod components;
mod graph;
mod shift;
mod theorems;

pub use axioms::{
    apply_mutation, verify_edge_axioms, AxiomReport, CheckResult, CheckStatus, Counterexample, EdgeMutation,
    AXIOM_NAMES,
};
pub use components::{component_analysis, ComponentDecomposition};
pub use graph::{compute_edges, ArityOutcome, EdgeConfig, EdgeGraph, Flavor, PairProvenance};
pub use shift::{sample_shift_chains, shift_tolerance_chain, ShiftFailure, ShiftSampleReport, ShiftedChain};
pub use theorems::{verify_edge_theorems, THEOREM_NAMES};
