//! Decision procedures for deterministic top-down recognizability of
//! regular tree languages.
//!
//! The input is a deterministic bottom-up tree automaton (DBA). The library
//! answers whether its language can also be recognized by a deterministic
//! top-down tree automaton (DTA), in polynomial time, and backs the answer
//! with evidence either way:
//!
//! - a **no** comes with a concrete witness: a context and three trees such
//!   that two of them belong to the language and the single-position
//!   exchange of their children does not;
//! - a **yes** can be paired with the constructed subset-state DTA, which
//!   then recognizes exactly the same language.
//!
//! Module map:
//!
//! - [`trees`]: ranked alphabets, trees, one-hole contexts, bounded
//!   enumeration in a canonical order.
//! - [`automata`]: DBA/DTA representations, evaluation, reduction,
//!   completion with an implicit trap state, the size measure.
//! - [`decision`]: the conflict-triple fixpoint, witness materialization,
//!   the top-level decision, and the subset-state DTA construction.
//! - [`oracle`]: independent brute-force checks (bounded exchange-property
//!   search, bounded language comparison) and a seeded random-automaton
//!   generator for differential testing.
//! - [`format`]: the `.dba`/`.dta` text formats with position-bearing
//!   diagnostics.
//! - [`report`]: serializable decision reports.
//!
//! The bounded searches and the differential batch runner use data-parallel
//! inner loops when the `parallel` feature (default) is enabled; disabling
//! it falls back to sequential code with identical results.

pub mod automata;
pub mod decision;
pub mod format;
pub mod oracle;
mod par;
pub mod report;
pub mod trees;

pub use automata::{Dba, Dta, Run, StateId, Transition};
pub use decision::{
    associated_dta, close_triples, find_conflict, is_top_down_deterministic, seed_triples,
    ConflictWitness, Decision, DecisionError, Triple, TripleSet,
};
pub use oracle::{
    bounded_language_equal, bounded_subset, exchange_violation_search, random_dba, GenSpec,
};
pub use report::{explain, Report};
pub use trees::{Context, NodeAddress, RankedAlphabet, SymbolId, Tree};
