//! Negation normal form and prenex form.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::subst::fresh_name;
use crate::syntax::{Formula, Quantifier, Symbol, Term, Variable};

/// Pushes negations to atoms and removes implications. Quantifiers over
/// `BOTTOM` are vacuous and collapse to truth values; `And`/`Or` are
/// flattened and truth constants simplified away.
pub fn nnf(f: &Formula) -> Formula {
    nnf_signed(f, true)
}

fn nnf_signed(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::negation(f.clone())
            }
        }
        Formula::Not(g) => nnf_signed(g, !positive),
        Formula::And(gs) => {
            let parts = gs.iter().map(|g| nnf_signed(g, positive)).collect();
            if positive {
                conj(parts)
            } else {
                disj(parts)
            }
        }
        Formula::Or(gs) => {
            let parts = gs.iter().map(|g| nnf_signed(g, positive)).collect();
            if positive {
                disj(parts)
            } else {
                conj(parts)
            }
        }
        Formula::Implies(a, b) => {
            let parts = alloc::vec![nnf_signed(a, !positive), nnf_signed(b, positive)];
            if positive {
                disj(parts)
            } else {
                conj(parts)
            }
        }
        Formula::Quant(q, v, body) => {
            let q = if positive { *q } else { flip(*q) };
            if v.sort.is_bottom() {
                return match q {
                    Quantifier::Forall => Formula::truth(),
                    Quantifier::Exists => Formula::falsity(),
                };
            }
            let body = nnf_signed(body, positive);
            if is_truth(&body) || is_falsity(&body) {
                return body;
            }
            Formula::Quant(q, v.clone(), Box::new(body))
        }
    }
}

fn flip(q: Quantifier) -> Quantifier {
    match q {
        Quantifier::Forall => Quantifier::Exists,
        Quantifier::Exists => Quantifier::Forall,
    }
}

pub(crate) fn is_truth(f: &Formula) -> bool {
    matches!(f, Formula::And(v) if v.is_empty())
}

pub(crate) fn is_falsity(f: &Formula) -> bool {
    matches!(f, Formula::Or(v) if v.is_empty())
}

/// Flattened conjunction with truth constants simplified.
pub fn conj(parts: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::And(inner) => out.extend(inner),
            p if is_falsity(&p) => return Formula::falsity(),
            p => out.push(p),
        }
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Formula::And(out)
    }
}

/// Flattened disjunction with truth constants simplified.
pub fn disj(parts: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::Or(inner) => out.extend(inner),
            p if is_truth(&p) => return Formula::truth(),
            p => out.push(p),
        }
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Formula::Or(out)
    }
}

/// A quantifier prefix followed by a quantifier-free matrix in negation
/// normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prenex {
    pub prefix: Vec<(Quantifier, Variable)>,
    pub matrix: Formula,
}

impl Prenex {
    pub fn to_formula(&self) -> Formula {
        self.prefix.iter().rev().fold(self.matrix.clone(), |acc, (q, v)| Formula::Quant(*q, v.clone(), Box::new(acc)))
    }
}

/// Prenex form of `f`: negation normal form, bound variables renamed
/// apart, then quantifiers pulled out left to right.
pub fn prenex(f: &Formula) -> Prenex {
    let f = nnf(f);
    let mut taken: BTreeSet<Symbol> = f.free_vars().into_iter().map(|v| v.name).collect();
    let renamed = rename_bound(&f, &mut taken, &BTreeMap::new());
    let mut prefix = Vec::new();
    let matrix = pull(renamed, &mut prefix);
    Prenex { prefix, matrix }
}

/// The prenex form as a single formula.
pub fn to_prenex(f: &Formula) -> Formula {
    prenex(f).to_formula()
}

fn rename_bound(f: &Formula, taken: &mut BTreeSet<Symbol>, env: &BTreeMap<Variable, Variable>) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(a.rename(env)),
        Formula::Not(g) => Formula::negation(rename_bound(g, taken, env)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename_bound(g, taken, env)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_bound(g, taken, env)).collect()),
        Formula::Implies(a, b) => Formula::implies(rename_bound(a, taken, env), rename_bound(b, taken, env)),
        Formula::Quant(q, v, body) => {
            let w = if taken.contains(&v.name) {
                Variable { name: fresh_name(v.name.name(), taken), sort: v.sort.clone() }
            } else {
                v.clone()
            };
            taken.insert(w.name.clone());
            let mut env = env.clone();
            env.insert(v.clone(), w.clone());
            Formula::Quant(*q, w, Box::new(rename_bound(body, taken, &env)))
        }
    }
}

fn pull(f: Formula, prefix: &mut Vec<(Quantifier, Variable)>) -> Formula {
    match f {
        Formula::Quant(q, v, body) => {
            prefix.push((q, v));
            pull(*body, prefix)
        }
        Formula::And(gs) => conj(gs.into_iter().map(|g| pull(g, prefix)).collect()),
        Formula::Or(gs) => disj(gs.into_iter().map(|g| pull(g, prefix)).collect()),
        other => other,
    }
}

/// Replaces variables by terms in a quantifier-free formula.
pub(crate) fn substitute_matrix(f: &Formula, map: &BTreeMap<Variable, Term>) -> Formula {
    let s: crate::subst::Substitution = map.iter().map(|(v, t)| (v.clone(), t.clone())).collect();
    s.apply_formula(f)
}
