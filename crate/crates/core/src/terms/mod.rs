//! Term operations, free algebras, cyclic and Taylor terms, and the special
//! binary and ternary terms used by the edge machinery.

mod conditions;
mod cyclic;
mod free;
mod local;
mod meet;
mod operation;
mod taylor;

pub use conditions::{condition_checks, ConditionReport};
pub(crate) use cyclic::family_cyclic;
pub use cyclic::{cyclic_operations, CyclicSearch};
pub use free::{free_algebra, free_algebra_family, FreeAlgebra};
pub use local::{local_structure, semilattice_towards, LocalStructure};
pub use meet::{universal_meet, universal_meet_family, MeetCertificate, UniversalMeet};
pub use operation::{full_composition, term_apply, TermOperation, TermTree};
pub use taylor::{clone_contains, is_majority, is_malcev, is_prime, least_prime_above, taylor_report, TaylorReport};
