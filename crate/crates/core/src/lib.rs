//! Order-sorted first-order logic: sort hierarchies, well-sorted syntax,
//! sorted unification, clause normal form and un-Skolemization, resolution
//! with proof traces, and the language-restricted report procedure for
//! networks of agents.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches
//! files, clocks or threads lives in the `osfol` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod network;
pub mod report;
pub mod saturation;
pub mod sorts;
pub mod subst;
pub mod syntax;
pub mod transform;
pub mod unify;

pub use network::{Agent, AgentId, AgentNetwork, Consistency, ValidationReport};
pub use report::{osfol_recv, osfol_report, osfol_send, Message, PayloadItem, ReportConfig, ReportOutcome, Verdict};
pub use saturation::{saturate, Limits, ProofResult, Saturation};
pub use sorts::{Sort, SortError, SortHierarchy};
pub use subst::Substitution;
pub use syntax::{Atom, Clause, Formula, Literal, Signature, Symbol, Term, Variable};
pub use unify::{sigma_mgu, UnifyFailure};
