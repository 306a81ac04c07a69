//! Multisorted CSP instances over small idempotent algebras: brute-force
//! solving, (k,l)-minimality, consistent retractive maps, quotients and
//! subdirectly irreducible splitting, and the large centralizer retraction.

mod elimination;
mod instance;
mod largecentred;
mod maps;
mod minimize;
mod random;
mod solve;
mod structure;
mod template;

pub use elimination::{maroti_witness, sedge_injection_check, EliminationWitness, InjectionReport};
pub use instance::{Constraint, Instance, Variable};
pub use largecentred::{
    idempotent_power, large_centralizer_quotient, largecentred_retraction, EdgeChoice, LargeCentredRetraction,
};
pub use maps::{consistent_maps, retract_algebra, ConsistentMapSet, MapReport, Retraction};
pub use minimize::{is_kl_minimal, kl_minimize, Minimized};
pub use random::{random_instance, solution_retractions, RandomShape};
pub use solve::{brute_force_solve, first_solution, is_solvable, solutions_through_points};
pub use structure::{
    large_centralizer_analysis, meet_irreducibles, quotient_instance, si_decompose, DomainAnalysis, SiDecomposition,
};
pub use template::{canonical_form, hs_closure, CanonicalForm, Template, TemplateMember, CANONICAL_SIZE};
