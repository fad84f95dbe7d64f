//! File formats, command line and schedulers around `osfol-core`.

pub mod cli;
pub mod parse;
pub mod schedule;

pub use osfol_core as core;
pub use parse::{parse_clause, parse_formula, parse_problem, print_problem, ParseError, ParseOptions, Problem};
pub use schedule::{run_report, Deadline, Schedule};
