//! Order-sorted unification.
//!
//! The solver works on a set of temporary equations `s ≟ t` and a list of
//! solved equations `x = t`. Five rules transform the set until only
//! solved equations remain:
//!
//! 1. delete `x ≟ x`;
//! 2. orient `t ≟ x` to `x ≟ t` when `t` is not a variable;
//! 3. decompose `f(s̄) ≟ f(t̄)`, failing on a symbol clash;
//! 4. eliminate `y ≟ t` for non-variable `t`, failing if `y` occurs in `t`
//!    or `[t] ⋠ [y]`;
//! 5. merge two distinct variables, binding toward the smaller sort or,
//!    for incomparable sorts, to a fresh variable at their meet.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::sorts::Sort;
use crate::subst::Substitution;
use crate::syntax::{Atom, NameSupply, Signature, Symbol, Term, Variable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnifyFailure {
    #[error("different predicates `{0}` and `{1}`")]
    PredicateMismatch(Symbol, Symbol),
    #[error("`{0}` applied to different numbers of arguments")]
    ArityMismatch(Symbol),
    #[error("rule 3: symbol clash between `{0}` and `{1}`")]
    Clash(Symbol, Symbol),
    #[error("rule 4: {var} occurs in {term}")]
    Occurs { var: Variable, term: Term },
    #[error("rule 4: {term} has sort {term_sort}, not below {var}")]
    SortMismatch { var: Variable, term: Term, term_sort: Sort },
    #[error("rule 5: sorts of {0} and {1} have only BOTTOM in common")]
    BottomGlb(Variable, Variable),
    #[error("rule 5: sorts of {0} and {1} have no unique greatest lower bound")]
    NoUniqueGlb(Variable, Variable),
    #[error("undeclared function or constant `{0}`")]
    Undeclared(Symbol),
}

impl UnifyFailure {
    /// The rule that failed, when the failure comes from one.
    pub fn rule(&self) -> Option<u8> {
        match self {
            UnifyFailure::Clash(..) => Some(3),
            UnifyFailure::Occurs { .. } | UnifyFailure::SortMismatch { .. } => Some(4),
            UnifyFailure::BottomGlb(..) | UnifyFailure::NoUniqueGlb(..) => Some(5),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MergeError {
    #[error("sorts of {0} and {1} are comparable")]
    Comparable(Variable, Variable),
    #[error("sorts of {0} and {1} have only BOTTOM in common")]
    Bottom(Variable, Variable),
    #[error("sorts of {0} and {1} have no unique greatest lower bound")]
    NoUniqueGlb(Variable, Variable),
}

/// Joins two variables of incomparable sorts into a fresh variable at the
/// greatest lower bound of their sorts.
pub fn glb_variable_merge(
    v1: &Variable,
    v2: &Variable,
    sig: &Signature,
    supply: &mut NameSupply,
    taken: &BTreeSet<Symbol>,
) -> Result<(Variable, Substitution), MergeError> {
    let h = sig.hierarchy();
    if h.le(&v1.sort, &v2.sort) || h.le(&v2.sort, &v1.sort) {
        return Err(MergeError::Comparable(v1.clone(), v2.clone()));
    }
    let meet = match h.glb(&[v1.sort.clone(), v2.sort.clone()]) {
        Ok(s) if s.is_bottom() => return Err(MergeError::Bottom(v1.clone(), v2.clone())),
        Ok(s) => s,
        Err(_) => return Err(MergeError::NoUniqueGlb(v1.clone(), v2.clone())),
    };
    let x = supply.fresh_var(&meet, taken);
    let mut s = Substitution::new();
    s.bind(v1.clone(), Term::Var(x.clone()));
    s.bind(v2.clone(), Term::Var(x.clone()));
    Ok((x, s))
}

/// Σ-mgu of a nonempty set of atoms sharing one predicate.
pub fn sigma_mgu(atoms: &[Atom], sig: &Signature) -> Result<Substitution, UnifyFailure> {
    let pairs = atom_equations(atoms)?;
    let taken = names_in(&pairs);
    Solver::new(sig, &mut NameSupply::new("_"), taken).solve(pairs, &mut priority)
}

/// Σ-mgu of a list of term equations.
pub fn mgu_terms(pairs: &[(Term, Term)], sig: &Signature) -> Result<Substitution, UnifyFailure> {
    let pairs = pairs.to_vec();
    let taken = names_in(&pairs);
    Solver::new(sig, &mut NameSupply::new("_"), taken).solve(pairs, &mut priority)
}

/// Like [`sigma_mgu`] with a caller-owned fresh-name source; names in
/// `taken` are avoided as well.
pub fn sigma_mgu_with(
    atoms: &[Atom],
    sig: &Signature,
    supply: &mut NameSupply,
    taken: &BTreeSet<Symbol>,
) -> Result<Substitution, UnifyFailure> {
    let pairs = atom_equations(atoms)?;
    let mut all = names_in(&pairs);
    all.extend(taken.iter().cloned());
    Solver::new(sig, supply, all).solve(pairs, &mut priority)
}

/// Runs the rules with an arbitrary selection order: `choose(n)` returns
/// the index of the next equation among `n` pending ones.
pub fn sigma_mgu_selected(
    atoms: &[Atom],
    sig: &Signature,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<Substitution, UnifyFailure> {
    let pairs = atom_equations(atoms)?;
    let taken = names_in(&pairs);
    let mut pick = |eqs: &[(Term, Term)]| choose(eqs.len()) % eqs.len();
    Solver::new(sig, &mut NameSupply::new("_"), taken).solve(pairs, &mut pick)
}

fn atom_equations(atoms: &[Atom]) -> Result<Vec<(Term, Term)>, UnifyFailure> {
    let Some(first) = atoms.first() else {
        return Ok(Vec::new());
    };
    let mut pairs = Vec::new();
    for a in &atoms[1..] {
        if a.predicate != first.predicate {
            return Err(UnifyFailure::PredicateMismatch(first.predicate.clone(), a.predicate.clone()));
        }
        if a.args.len() != first.args.len() {
            return Err(UnifyFailure::ArityMismatch(a.predicate.clone()));
        }
        pairs.extend(first.args.iter().cloned().zip(a.args.iter().cloned()));
    }
    Ok(pairs)
}

fn names_in(pairs: &[(Term, Term)]) -> BTreeSet<Symbol> {
    let mut vs = Vec::new();
    for (l, r) in pairs {
        l.collect_vars(&mut vs);
        r.collect_vars(&mut vs);
    }
    vs.into_iter().map(|v| v.name).collect()
}

/// Deterministic selection: the first equation for the lowest rule number.
fn priority(eqs: &[(Term, Term)]) -> usize {
    (1..=5).find_map(|r| eqs.iter().position(|e| rule_of(e) == r)).unwrap_or(0)
}

fn rule_of(eq: &(Term, Term)) -> u8 {
    match eq {
        (Term::Var(x), Term::Var(y)) if x == y => 1,
        (Term::App(..), Term::Var(_)) => 2,
        (Term::App(..), Term::App(..)) => 3,
        (Term::Var(_), Term::App(..)) => 4,
        (Term::Var(_), Term::Var(_)) => 5,
    }
}

/// Picks the index of the next pending equation.
type Select<'s> = dyn FnMut(&[(Term, Term)]) -> usize + 's;

struct Solver<'a> {
    sig: &'a Signature,
    supply: &'a mut NameSupply,
    taken: BTreeSet<Symbol>,
    solved: Vec<(Variable, Term)>,
}

impl<'a> Solver<'a> {
    fn new(sig: &'a Signature, supply: &'a mut NameSupply, taken: BTreeSet<Symbol>) -> Self {
        Solver { sig, supply, taken, solved: Vec::new() }
    }

    fn solve(mut self, mut eqs: Vec<(Term, Term)>, select: &mut Select<'_>) -> Result<Substitution, UnifyFailure> {
        while !eqs.is_empty() {
            let i = select(&eqs);
            let (l, r) = eqs.remove(i);
            match (l, r) {
                (Term::Var(x), Term::Var(y)) if x == y => {}
                (t @ Term::App(..), Term::Var(x)) => eqs.push((Term::Var(x), t)),
                (Term::App(f, fa), Term::App(g, ga)) => {
                    if f != g || fa.len() != ga.len() {
                        return Err(UnifyFailure::Clash(f, g));
                    }
                    eqs.extend(fa.into_iter().zip(ga));
                }
                (Term::Var(y), t @ Term::App(..)) => {
                    if t.occurs(&y) {
                        return Err(UnifyFailure::Occurs { var: y, term: t });
                    }
                    let ts = self.sig.sort_of(&t).map_err(|_| undeclared(&t))?;
                    if !self.sig.hierarchy().le(&ts, &y.sort) {
                        return Err(UnifyFailure::SortMismatch { var: y, term: t, term_sort: ts });
                    }
                    self.eliminate(&mut eqs, [(y, t)]);
                }
                (Term::Var(y), Term::Var(z)) => {
                    let h = self.sig.hierarchy();
                    if h.le(&y.sort, &z.sort) {
                        self.eliminate(&mut eqs, [(z, Term::Var(y))]);
                    } else if h.le(&z.sort, &y.sort) {
                        self.eliminate(&mut eqs, [(y, Term::Var(z))]);
                    } else {
                        let mut names = self.taken.clone();
                        names.extend(self.solved.iter().map(|(v, _)| v.name.clone()));
                        match glb_variable_merge(&y, &z, self.sig, self.supply, &names) {
                            Ok((x, _)) => {
                                self.taken.insert(x.name.clone());
                                self.eliminate(&mut eqs, [(y, Term::Var(x.clone())), (z, Term::Var(x))]);
                            }
                            Err(MergeError::NoUniqueGlb(a, b)) => return Err(UnifyFailure::NoUniqueGlb(a, b)),
                            Err(_) => return Err(UnifyFailure::BottomGlb(y, z)),
                        }
                    }
                }
            }
        }
        Ok(self.solved.into_iter().collect())
    }

    /// Applies the bindings to every pending and solved equation and
    /// records them as solved.
    fn eliminate<const N: usize>(&mut self, eqs: &mut [(Term, Term)], bindings: [(Variable, Term); N]) {
        let s: Substitution = bindings.iter().cloned().collect();
        for (l, r) in eqs.iter_mut() {
            *l = s.apply_term(l);
            *r = s.apply_term(r);
        }
        for (_, t) in self.solved.iter_mut() {
            *t = s.apply_term(t);
        }
        self.solved.extend(bindings);
    }
}

fn undeclared(t: &Term) -> UnifyFailure {
    match t {
        Term::App(f, _) => UnifyFailure::Undeclared(f.clone()),
        Term::Var(v) => UnifyFailure::Undeclared(v.name.clone()),
    }
}
