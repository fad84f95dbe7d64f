//! Normal forms, Skolemization, un-Skolemization and relativization.

mod normal;
mod relativize;
mod skolem;
mod unskolem;

pub use normal::{conj, disj, nnf, prenex, to_prenex, Prenex};
pub use relativize::{relativize_clause, relativize_formula, relativize_signature, Relativized};
pub use skolem::{clausify, cnf, skolemize, skolemize_prenex, SkolemEntry, SkolemTable};
pub use unskolem::{
    check_acceptable, has_valid_sort_literal, partition, unskolemize, QuantifiedClauses, UnskolemError, Violation,
};
