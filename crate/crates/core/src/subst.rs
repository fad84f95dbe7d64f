//! Well-sorted substitutions.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Atom, Clause, Formula, Literal, Signature, Symbol, SyntaxError, Term, Variable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("binding {var} to {term} does not descend in sort")]
    SortAscent { var: Variable, term: Term },
    #[error("bound variable {0} occurs in the range")]
    NotIdempotent(Variable),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// A finite map from variables to terms, applied simultaneously.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<Variable, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    /// Builds a substitution after checking sort descent and idempotence.
    pub fn checked(pairs: impl IntoIterator<Item = (Variable, Term)>, sig: &Signature) -> Result<Self, SubstError> {
        let s = Substitution { map: pairs.into_iter().filter(|(v, t)| t.as_var() != Some(v)).collect() };
        s.validate(sig)?;
        Ok(s)
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), SubstError> {
        for (v, t) in &self.map {
            sig.check_term(t)?;
            let ts = sig.sort_of(t)?;
            if !sig.hierarchy().le(&ts, &v.sort) {
                return Err(SubstError::SortAscent { var: v.clone(), term: t.clone() });
            }
        }
        for t in self.map.values() {
            if let Some(v) = self.map.keys().find(|v| t.occurs(v)) {
                return Err(SubstError::NotIdempotent(v.clone()));
            }
        }
        Ok(())
    }

    /// Inserts without checks; the caller keeps the invariants.
    pub fn bind(&mut self, v: Variable, t: Term) {
        if t.as_var() != Some(&v) {
            self.map.insert(v, t);
        }
    }

    pub fn get(&self, v: &Variable) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Variable> {
        self.map.keys()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply_term(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom { predicate: a.predicate.clone(), args: a.args.iter().map(|t| self.apply_term(t)).collect() }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal { atom: self.apply_atom(&l.atom), positive: l.positive }
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause::new(c.literals().iter().map(|l| self.apply_literal(l)).collect())
    }

    /// Applies to free occurrences only, renaming bound variables that
    /// would capture a variable of the range.
    pub fn apply_formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::Atom(a) => Formula::Atom(self.apply_atom(a)),
            Formula::Not(g) => Formula::negation(self.apply_formula(g)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.apply_formula(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.apply_formula(g)).collect()),
            Formula::Implies(a, b) => Formula::implies(self.apply_formula(a), self.apply_formula(b)),
            Formula::Quant(q, v, body) => {
                let mut inner = self.clone();
                inner.map.remove(v);
                let captures = inner.map.values().any(|t| t.occurs(v));
                if captures {
                    let mut taken = BTreeSet::new();
                    let mut all = BTreeSet::new();
                    f.all_vars(&mut all);
                    for t in inner.map.values() {
                        let mut vs = Vec::new();
                        t.collect_vars(&mut vs);
                        all.extend(vs);
                    }
                    taken.extend(all.into_iter().map(|x| x.name));
                    let w = Variable { name: fresh_name(v.name.name(), &taken), sort: v.sort.clone() };
                    inner.map.insert(v.clone(), Term::Var(w.clone()));
                    Formula::Quant(*q, w, Box::new(inner.apply_formula(body)))
                } else {
                    Formula::Quant(*q, v.clone(), Box::new(inner.apply_formula(body)))
                }
            }
        }
    }

    /// `self` followed by `next`: x ↦ next(self(x)).
    pub fn then(&self, next: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.bind(v.clone(), next.apply_term(t));
        }
        for (v, t) in &next.map {
            if !self.map.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }

    /// Injective, sort-preserving map from variables to variables.
    pub fn is_renaming(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map.iter().all(|(v, t)| match t {
            Term::Var(w) => w.sort == v.sort && seen.insert(w.clone()),
            Term::App(..) => false,
        })
    }
}

impl FromIterator<(Variable, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Variable, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.bind(v, t);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}/{t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{base}_{k}` for the least `k` not in `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<Symbol>) -> Symbol {
    let stem = match base.rfind('_') {
        Some(p) if p > 0 && base[p + 1..].bytes().all(|b| b.is_ascii_digit()) && p + 1 < base.len() => &base[..p],
        _ => base,
    };
    (1..).map(|k| Symbol::new(&format!("{stem}_{k}"))).find(|s| !taken.contains(s)).expect("unbounded supply")
}

/// Renames the variables of `c2` so that no variable name of `c1` is used.
pub fn standardize_apart(c1: &Clause, c2: &Clause) -> (Clause, Clause) {
    let left: BTreeSet<Symbol> = c1.variables().into_iter().map(|v| v.name).collect();
    let right = c2.variables();
    if right.iter().all(|v| !left.contains(&v.name)) {
        return (c1.clone(), c2.clone());
    }
    let mut taken: BTreeSet<Symbol> = left.clone();
    taken.extend(right.iter().map(|v| v.name.clone()));
    let mut map = BTreeMap::new();
    for v in right {
        if left.contains(&v.name) {
            let name = fresh_name(v.name.name(), &taken);
            taken.insert(name.clone());
            map.insert(v.clone(), Variable { name, sort: v.sort });
        }
    }
    (c1.clone(), c2.rename(&map))
}

/// Renames every variable of `c` away from `taken`, extending `taken`.
pub fn rename_away(c: &Clause, taken: &mut BTreeSet<Symbol>) -> Clause {
    let mut map = BTreeMap::new();
    for v in c.variables() {
        if taken.contains(&v.name) {
            let name = fresh_name(v.name.name(), taken);
            taken.insert(name.clone());
            map.insert(v.clone(), Variable { name, sort: v.sort });
        } else {
            taken.insert(v.name.clone());
        }
    }
    if map.is_empty() {
        c.clone()
    } else {
        c.rename(&map)
    }
}
