//! Inference and simplification rules on clauses.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::sorts::Sort;
use crate::subst::{standardize_apart, Substitution};
use crate::syntax::{Clause, Literal, NameSupply, Signature, Symbol, Term, Variable};
use crate::unify::sigma_mgu_with;

/// `(sort, argument)` when `l` is an atom over a sort predicate.
fn sort_literal<'a>(l: &'a Literal, sig: &Signature) -> Option<(Sort, &'a Term)> {
    if l.atom.args.len() == 1 && sig.is_sort_predicate(&l.atom.predicate) {
        Some((Sort::new(l.atom.predicate.name()), &l.atom.args[0]))
    } else {
        None
    }
}

/// `s(t)` with `[t] ⪯ s`, true in every Σ-structure.
pub fn is_valid_sort_atom(l: &Literal, sig: &Signature) -> bool {
    match sort_literal(l, sig) {
        Some((s, t)) => sig.sort_of(t).map(|ts| sig.hierarchy().le(&ts, &s)).unwrap_or(false),
        None => false,
    }
}

/// Deletes tautologies and clauses with a valid positive sort literal,
/// and removes negated valid sort literals. `None` means the clause is
/// valid.
pub fn simplify(c: &Clause, sig: &Signature) -> Option<Clause> {
    if c.is_tautology() {
        return None;
    }
    let mut kept = Vec::with_capacity(c.len());
    for l in c.literals() {
        if is_valid_sort_atom(l, sig) {
            if l.positive {
                return None;
            }
        } else {
            kept.push(l.clone());
        }
    }
    if kept.len() == c.len() {
        Some(c.clone())
    } else {
        Some(Clause::new(kept))
    }
}

fn names(cs: &[&Clause]) -> BTreeSet<Symbol> {
    cs.iter().flat_map(|c| c.variables()).map(|v| v.name).collect()
}

/// Binary resolvent on literal `i` of `c1` and literal `j` of `c2`
/// (0-based), after renaming `c2` apart from `c1`.
pub fn resolvent(c1: &Clause, i: usize, c2: &Clause, j: usize, sig: &Signature) -> Option<Clause> {
    let (l1, l2) = (c1.literals().get(i)?, c2.literals().get(j)?);
    if l1.positive == l2.positive || l1.atom.predicate != l2.atom.predicate {
        return None;
    }
    let (_, c2) = standardize_apart(c1, c2);
    let l2 = &c2.literals()[j];
    let taken = names(&[c1, &c2]);
    let mgu = sigma_mgu_with(&[l1.atom.clone(), l2.atom.clone()], sig, &mut NameSupply::new("_"), &taken).ok()?;
    let mut lits: Vec<Literal> = c1.without(i).iter().map(|l| mgu.apply_literal(l)).collect();
    lits.extend(c2.without(j).iter().map(|l| mgu.apply_literal(l)));
    Some(Clause::new(lits))
}

/// Factor of `c` unifying literals `i < j` (0-based).
pub fn factor(c: &Clause, i: usize, j: usize, sig: &Signature) -> Option<Clause> {
    let (l1, l2) = (c.literals().get(i)?, c.literals().get(j)?);
    if i == j || l1.positive != l2.positive || l1.atom.predicate != l2.atom.predicate {
        return None;
    }
    let taken = names(&[c]);
    let mgu = sigma_mgu_with(&[l1.atom.clone(), l2.atom.clone()], sig, &mut NameSupply::new("_"), &taken).ok()?;
    Some(mgu.apply_clause(c))
}

/// For `~s(x:s')` at index `i` with `s' ⋠ s`, instantiates `x` to a fresh
/// variable at `glb(s, s')`.
pub fn sort_instance(c: &Clause, i: usize, sig: &Signature) -> Option<Clause> {
    let l = c.literals().get(i)?;
    if l.positive {
        return None;
    }
    let (s, t) = sort_literal(l, sig)?;
    let x = t.as_var()?;
    let h = sig.hierarchy();
    if h.le(&x.sort, &s) {
        return None;
    }
    let g = h.glb(&[s, x.sort.clone()]).ok()?;
    if g.is_bottom() {
        return None;
    }
    let y: Variable = NameSupply::new("_").fresh_var(&g, &names(&[c]));
    let theta: Substitution = [(x.clone(), Term::Var(y))].into_iter().collect();
    Some(theta.apply_clause(c))
}

/// All binary resolvents of `c1` against `c2` as `(i, j, clause)`.
pub fn resolvents(c1: &Clause, c2: &Clause, sig: &Signature) -> Vec<(usize, usize, Clause)> {
    let mut out = Vec::new();
    for (i, l1) in c1.literals().iter().enumerate() {
        for (j, l2) in c2.literals().iter().enumerate() {
            if l1.positive != l2.positive && l1.atom.predicate == l2.atom.predicate {
                if let Some(r) = resolvent(c1, i, c2, j, sig) {
                    out.push((i, j, r));
                }
            }
        }
    }
    out
}

pub fn factors(c: &Clause, sig: &Signature) -> Vec<(usize, usize, Clause)> {
    let lits = c.literals();
    let mut out = Vec::new();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            if let Some(f) = factor(c, i, j, sig) {
                out.push((i, j, f));
            }
        }
    }
    out
}

pub fn sort_instances(c: &Clause, sig: &Signature) -> Vec<(usize, Clause)> {
    (0..c.len()).filter_map(|i| sort_instance(c, i, sig).map(|d| (i, d))).collect()
}
