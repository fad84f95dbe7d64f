//! Translation of sorted formulas and signatures into unsorted logic.
//!
//! Every variable moves to `TOP` and its sort becomes a guard literal;
//! the hierarchy and the function profiles become axioms over the sort
//! predicates.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::normal::{conj, disj};
use crate::sorts::{Sort, SortHierarchy};
use crate::syntax::{Atom, Clause, Formula, Literal, Quantifier, Signature, Symbol, SyntaxError, Term, Variable};

/// The unsorted counterpart of a signature and its axioms.
#[derive(Debug, Clone)]
pub struct Relativized {
    pub signature: Signature,
    pub axioms: Vec<Clause>,
}

fn guard(s: &Sort, t: Term) -> Atom {
    Atom::new(s.name(), alloc::vec![t])
}

/// Flat signature with the same symbols, all profiles over `TOP`, plus
/// subsort and closure axioms.
pub fn relativize_signature(sig: &Signature) -> Result<Relativized, SyntaxError> {
    let h = sig.hierarchy();
    let mut flat = Signature::new(SortHierarchy::default());
    for (p, args) in sig.predicates() {
        flat.declare_predicate(p.clone(), args.iter().map(|_| Sort::top()).collect())?;
    }
    for (f, d) in sig.functions() {
        flat.declare_function(f.clone(), d.args.iter().map(|_| Sort::top()).collect(), Sort::top())?;
    }
    let mut axioms = Vec::new();
    let x = Term::Var(Variable::new("x", Sort::top()));
    let proper = |s: &Sort| !s.is_top() && !s.is_bottom();
    for (a, b) in h.edges() {
        if proper(a) && proper(b) {
            axioms
                .push(Clause::new(alloc::vec![Literal::neg(guard(a, x.clone())), Literal::pos(guard(b, x.clone())),]));
        }
    }
    for (f, d) in sig.functions() {
        if d.result.is_top() {
            continue;
        }
        let vars: Vec<Variable> = (1..=d.args.len()).map(|i| Variable::new(&format!("x{i}"), Sort::top())).collect();
        let mut lits: Vec<Literal> = Vec::new();
        let mut vacuous = false;
        for (v, s) in vars.iter().zip(&d.args) {
            if s.is_bottom() {
                vacuous = true;
            } else if !s.is_top() {
                lits.push(Literal::neg(guard(s, Term::Var(v.clone()))));
            }
        }
        if vacuous {
            continue;
        }
        let app = Term::App(f.clone(), vars.into_iter().map(Term::Var).collect());
        if d.result.is_bottom() {
            axioms.push(Clause::new(lits));
        } else {
            lits.push(Literal::pos(guard(&d.result, app)));
            axioms.push(Clause::new(lits));
        }
    }
    Ok(Relativized { signature: flat, axioms })
}

/// Moves every variable to `TOP`. Names used at several sorts get the
/// sort appended so that distinct variables stay distinct.
fn flatten_names(vars: &[Variable]) -> BTreeMap<Variable, Variable> {
    let mut sorts_of: BTreeMap<&Symbol, BTreeSet<&Sort>> = BTreeMap::new();
    for v in vars {
        sorts_of.entry(&v.name).or_default().insert(&v.sort);
    }
    vars.iter()
        .map(|v| {
            let name = if sorts_of[&v.name].len() > 1 && !v.sort.is_top() {
                format!("{}_{}", v.name, v.sort)
            } else {
                format!("{}", v.name)
            };
            (v.clone(), Variable::new(&name, Sort::top()))
        })
        .collect()
}

/// Relativizes a clause: each variable `x:s` becomes `x` with the guard
/// `~s(x)`. Returns `None` for clauses with a `BOTTOM` variable, which
/// are vacuously true.
pub fn relativize_clause(c: &Clause) -> Option<Clause> {
    let vars = c.variables();
    if vars.iter().any(|v| v.sort.is_bottom()) {
        return None;
    }
    let map = flatten_names(&vars);
    let mut lits: Vec<Literal> = c.rename(&map).into_literals();
    for v in &vars {
        if !v.sort.is_top() {
            lits.push(Literal::neg(guard(&v.sort, Term::Var(map[v].clone()))));
        }
    }
    Some(Clause::new(lits))
}

/// Relativizes a formula: `∀x:s.ψ` becomes `∀x.(s(x) → ψ′)` and
/// `∃x:s.ψ` becomes `∃x.(s(x) ∧ ψ′)`.
pub fn relativize_formula(f: &Formula) -> Formula {
    let mut all = BTreeSet::new();
    f.all_vars(&mut all);
    let vars: Vec<Variable> = all.into_iter().collect();
    let map = flatten_names(&vars);
    go(f, &map)
}

fn go(f: &Formula, map: &BTreeMap<Variable, Variable>) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(a.rename(map)),
        Formula::Not(g) => Formula::negation(go(g, map)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| go(g, map)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| go(g, map)).collect()),
        Formula::Implies(a, b) => Formula::implies(go(a, map), go(b, map)),
        Formula::Quant(q, v, body) => {
            let w = map[v].clone();
            let inner = go(body, map);
            if v.sort.is_bottom() {
                return match q {
                    Quantifier::Forall => Formula::truth(),
                    Quantifier::Exists => Formula::falsity(),
                };
            }
            let body = if v.sort.is_top() {
                inner
            } else {
                let g = Formula::Atom(guard(&v.sort, Term::Var(w.clone())));
                match q {
                    Quantifier::Forall => disj(alloc::vec![Formula::negation(g), inner]),
                    Quantifier::Exists => conj(alloc::vec![g, inner]),
                }
            };
            Formula::Quant(*q, w, Box::new(body))
        }
    }
}
