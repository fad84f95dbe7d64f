//! Subsumption and variant checks by one-sided matching.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::syntax::{Clause, Literal, Signature, Term, Variable};

/// Bindings with an undo trail: entries past a saved length are dropped
/// on backtracking.
type Bindings<'a, 'b> = Vec<(&'a Variable, &'b Term)>;

fn lookup<'b>(b: &Bindings<'_, 'b>, x: &Variable) -> Option<&'b Term> {
    b.iter().find(|(v, _)| *v == x).map(|(_, t)| *t)
}

/// Extends `b` so that `pattern` instantiated by `b` equals `target`.
/// Variables of `target` are treated as constants. Every binding
/// `x:s ↦ t` must satisfy `[t] ⪯ s`.
fn match_term<'a, 'b>(pattern: &'a Term, target: &'b Term, b: &mut Bindings<'a, 'b>, sig: &Signature) -> bool {
    match pattern {
        Term::Var(x) => match lookup(b, x) {
            Some(t) => t == target,
            None => {
                let Ok(ts) = sig.sort_of(target) else { return false };
                if !sig.hierarchy().le(&ts, &x.sort) {
                    return false;
                }
                b.push((x, target));
                true
            }
        },
        Term::App(f, args) => match target {
            Term::App(g, targs) if f == g && args.len() == targs.len() => {
                args.iter().zip(targs).all(|(p, t)| match_term(p, t, b, sig))
            }
            _ => false,
        },
    }
}

fn match_literal<'a, 'b>(p: &'a Literal, t: &'b Literal, b: &mut Bindings<'a, 'b>, sig: &Signature) -> bool {
    if p.positive != t.positive || p.atom.predicate != t.atom.predicate || p.atom.args.len() != t.atom.args.len() {
        return false;
    }
    let mark = b.len();
    let ok = p.atom.args.iter().zip(&t.atom.args).all(|(x, y)| match_term(x, y, b, sig));
    if !ok {
        b.truncate(mark);
    }
    ok
}

fn size(l: &Literal) -> usize {
    fn term(t: &Term) -> usize {
        match t {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(term).sum::<usize>(),
        }
    }
    l.atom.args.iter().map(term).sum()
}

/// Cheap necessary condition for `p` to match `t`: same sign and
/// predicate, and argument head symbols agree wherever `p` has one.
fn may_match(p: &Literal, t: &Literal) -> bool {
    p.positive == t.positive
        && p.atom.predicate == t.atom.predicate
        && p.atom.args.len() == t.atom.args.len()
        && p.atom.args.iter().zip(&t.atom.args).all(|(a, b)| match (a, b) {
            (Term::App(f, xs), Term::App(g, ys)) => f == g && xs.len() == ys.len(),
            (Term::App(..), Term::Var(_)) => false,
            (Term::Var(_), _) => true,
        })
}

/// True iff some Σ-substitution θ has `c1θ ⊆ c2`.
pub fn subsumes(c1: &Clause, c2: &Clause, sig: &Signature) -> bool {
    // A literal without plausible targets settles the question; otherwise
    // the search starts with the most constrained literals.
    let mut plan: Vec<(&Literal, Vec<&Literal>)> = Vec::with_capacity(c1.len());
    for l in c1.literals() {
        let cands: Vec<&Literal> = c2.literals().iter().filter(|t| may_match(l, t)).collect();
        if cands.is_empty() {
            return false;
        }
        plan.push((l, cands));
    }
    plan.sort_by_cached_key(|(l, cands)| (cands.len(), usize::MAX - size(l)));
    fn go<'a, 'b>(plan: &[(&'a Literal, Vec<&'b Literal>)], b: &mut Bindings<'a, 'b>, sig: &Signature) -> bool {
        let Some(((l, cands), rest)) = plan.split_first() else { return true };
        for t in cands {
            let mark = b.len();
            if match_literal(l, t, b, sig) && go(rest, b, sig) {
                return true;
            }
            b.truncate(mark);
        }
        false
    }
    go(&plan, &mut Bindings::new(), sig)
}

/// Subsumption restricted to subsumers with no more literals than the
/// subsumed clause, which keeps factors from being deleted by their
/// parents.
pub fn subsumes_no_longer(c1: &Clause, c2: &Clause, sig: &Signature) -> bool {
    c1.len() <= c2.len() && subsumes(c1, c2, sig)
}

/// True iff `c2` is `c1` under an injective, sort-preserving renaming of
/// variables.
pub fn is_variant(c1: &Clause, c2: &Clause) -> bool {
    if c1.len() != c2.len() {
        return false;
    }
    fn rename_term(
        p: &Term,
        t: &Term,
        fwd: &mut BTreeMap<Variable, Variable>,
        back: &mut BTreeMap<Variable, Variable>,
    ) -> bool {
        match (p, t) {
            (Term::Var(x), Term::Var(y)) => {
                if x.sort != y.sort {
                    return false;
                }
                match (fwd.get(x), back.get(y)) {
                    (Some(a), Some(b)) => a == y && b == x,
                    (None, None) => {
                        fwd.insert(x.clone(), y.clone());
                        back.insert(y.clone(), x.clone());
                        true
                    }
                    _ => false,
                }
            }
            (Term::App(f, a), Term::App(g, b)) => {
                f == g && a.len() == b.len() && a.iter().zip(b).all(|(p, t)| rename_term(p, t, fwd, back))
            }
            _ => false,
        }
    }
    fn go(
        i: usize,
        l1: &[Literal],
        l2: &[Literal],
        used: &mut Vec<bool>,
        fwd: &mut BTreeMap<Variable, Variable>,
        back: &mut BTreeMap<Variable, Variable>,
    ) -> bool {
        let Some(p) = l1.get(i) else { return true };
        for (j, t) in l2.iter().enumerate() {
            if used[j] || p.positive != t.positive || p.atom.predicate != t.atom.predicate {
                continue;
            }
            let (sf, sb) = (fwd.clone(), back.clone());
            if p.atom.args.len() == t.atom.args.len()
                && p.atom.args.iter().zip(&t.atom.args).all(|(a, b)| rename_term(a, b, fwd, back))
            {
                used[j] = true;
                if go(i + 1, l1, l2, used, fwd, back) {
                    return true;
                }
                used[j] = false;
            }
            *fwd = sf;
            *back = sb;
        }
        false
    }
    let mut used = alloc::vec![false; c2.len()];
    go(0, c1.literals(), c2.literals(), &mut used, &mut BTreeMap::new(), &mut BTreeMap::new())
}
