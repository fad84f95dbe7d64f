//! Proof traces and their independent replay.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::inference::{factor, resolvent, simplify, sort_instance};
use super::subsume::is_variant;
use crate::syntax::{Clause, Signature, Symbol};

/// How a clause entered the derivation. Literal positions are 1-based
/// in the canonical literal order of the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inference {
    Input,
    Received(Symbol),
    Resolve { left: (usize, usize), right: (usize, usize) },
    Factor { parent: usize, first: usize, second: usize },
    SortSimp { parent: usize },
    SortInst { parent: usize, literal: usize },
}

impl Inference {
    pub fn parents(&self) -> Vec<usize> {
        match self {
            Inference::Input | Inference::Received(_) => Vec::new(),
            Inference::Resolve { left, right } => alloc::vec![left.0, right.0],
            Inference::Factor { parent, .. } | Inference::SortSimp { parent } | Inference::SortInst { parent, .. } => {
                alloc::vec![*parent]
            }
        }
    }
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inference::Input => f.write_str("input"),
            Inference::Received(a) => write!(f, "received {a}"),
            Inference::Resolve { left, right } => {
                write!(f, "resolve {}({}) + {}({})", left.0, left.1, right.0, right.1)
            }
            Inference::Factor { parent, first, second } => write!(f, "factor {parent}({first},{second})"),
            Inference::SortSimp { parent } => write!(f, "sortsimp {parent}"),
            Inference::SortInst { parent, literal } => write!(f, "sortinst {parent}({literal})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub id: usize,
    pub clause: Clause,
    pub inference: Inference,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {} ; {}", self.id, self.clause, self.inference)
    }
}

/// A derivation listed in increasing id order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    /// True when the last step derives the empty clause.
    pub fn is_refutation(&self) -> bool {
        self.steps.last().is_some_and(|s| s.clause.is_empty())
    }

    /// Clauses taken as premises, with the agent they came from.
    pub fn premises(&self) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(|s| matches!(s.inference, Inference::Input | Inference::Received(_)))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {step}: parent {parent} is not an earlier step")]
    MissingParent { step: usize, parent: usize },
    #[error("step {step}: literal {literal} does not exist in {parent}")]
    BadLiteral { step: usize, parent: usize, literal: usize },
    #[error("step {step}: the rule does not apply")]
    NotApplicable { step: usize },
    #[error("step {step}: recomputed {expected}, trace says {found}")]
    Mismatch { step: usize, expected: Clause, found: Clause },
    #[error("step {0} repeats an id")]
    DuplicateId(usize),
}

/// Recomputes every derived step from its parents. A step is accepted
/// when its clause is a variant of the raw conclusion or of the
/// conclusion after sort simplification.
pub fn replay(trace: &Trace, sig: &Signature) -> Result<(), ReplayError> {
    let mut known: BTreeMap<usize, &Clause> = BTreeMap::new();
    for s in &trace.steps {
        let step = s.id;
        let get = |p: usize| known.get(&p).copied().ok_or(ReplayError::MissingParent { step, parent: p });
        let lit = |c: &Clause, p: usize, k: usize| {
            if k == 0 || k > c.len() {
                Err(ReplayError::BadLiteral { step, parent: p, literal: k })
            } else {
                Ok(k - 1)
            }
        };
        let raw = match &s.inference {
            Inference::Input | Inference::Received(_) => None,
            Inference::Resolve { left, right } => {
                let (a, b) = (get(left.0)?, get(right.0)?);
                let (i, j) = (lit(a, left.0, left.1)?, lit(b, right.0, right.1)?);
                Some(resolvent(a, i, b, j, sig).ok_or(ReplayError::NotApplicable { step })?)
            }
            Inference::Factor { parent, first, second } => {
                let c = get(*parent)?;
                let (i, j) = (lit(c, *parent, *first)?, lit(c, *parent, *second)?);
                Some(factor(c, i, j, sig).ok_or(ReplayError::NotApplicable { step })?)
            }
            Inference::SortSimp { parent } => Some(get(*parent)?.clone()),
            Inference::SortInst { parent, literal } => {
                let c = get(*parent)?;
                let i = lit(c, *parent, *literal)?;
                Some(sort_instance(c, i, sig).ok_or(ReplayError::NotApplicable { step })?)
            }
        };
        if let Some(raw) = raw {
            let simplified = simplify(&raw, sig);
            let raw_ok = !matches!(s.inference, Inference::SortSimp { .. }) && is_variant(&raw, &s.clause);
            let simp_ok = simplified.as_ref().is_some_and(|c| is_variant(c, &s.clause));
            if !raw_ok && !simp_ok {
                return Err(ReplayError::Mismatch {
                    step,
                    expected: simplified.unwrap_or(raw),
                    found: s.clause.clone(),
                });
            }
        }
        if known.insert(step, &s.clause).is_some() {
            return Err(ReplayError::DuplicateId(step));
        }
    }
    Ok(())
}
