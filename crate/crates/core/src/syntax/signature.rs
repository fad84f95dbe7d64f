use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{Atom, Clause, Formula, Literal, Symbol, Term, Variable};
use crate::sorts::{Sort, SortError, SortHierarchy};

/// Argument sorts and result sort of a function symbol. Constants have no
/// arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionDecl {
    pub args: Vec<Sort>,
    pub result: Sort,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error("undeclared predicate `{0}`")]
    UndeclaredPredicate(Symbol),
    #[error("undeclared function or constant `{0}`")]
    UndeclaredFunction(Symbol),
    #[error("`{symbol}` expects {expected} arguments, found {found}")]
    Arity { symbol: Symbol, expected: usize, found: usize },
    #[error("argument {position} of `{symbol}` has sort {actual}, expected a subsort of {expected}")]
    IllSorted { symbol: Symbol, position: usize, expected: Sort, actual: Sort },
    #[error("`{0}` is already declared with a different profile")]
    Redeclared(Symbol),
    #[error("`{0}` is a sort name and cannot be declared as a predicate or function")]
    ReservedName(Symbol),
    #[error("sort `{0}` has no ground term")]
    Uninhabited(Sort),
}

/// Sorts, predicate declarations and function declarations.
///
/// Every sort other than `TOP` and `BOTTOM` has an implicit unary sort
/// predicate of the same name over `TOP`, and every witness constant of the
/// hierarchy is declared at its sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    hierarchy: SortHierarchy,
    predicates: BTreeMap<Symbol, Vec<Sort>>,
    functions: BTreeMap<Symbol, FunctionDecl>,
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new(SortHierarchy::default())
    }
}

impl Signature {
    pub fn new(hierarchy: SortHierarchy) -> Self {
        let mut sig = Signature { hierarchy, predicates: BTreeMap::new(), functions: BTreeMap::new() };
        sig.sync_hierarchy();
        sig
    }

    fn sync_hierarchy(&mut self) {
        for s in self.hierarchy.sorts() {
            if !s.is_top() && !s.is_bottom() {
                self.predicates.insert(Symbol::new(s.name()), alloc::vec![Sort::top()]);
            }
        }
        for (s, cs) in self.hierarchy.witnesses() {
            for c in cs {
                self.functions.entry(c.clone()).or_insert_with(|| FunctionDecl { args: Vec::new(), result: s.clone() });
            }
        }
    }

    pub fn hierarchy(&self) -> &SortHierarchy {
        &self.hierarchy
    }

    /// Replaces the hierarchy, e.g. by its GLB completion. Existing
    /// declarations must stay valid in the new order.
    pub fn set_hierarchy(&mut self, hierarchy: SortHierarchy) {
        self.hierarchy = hierarchy;
        self.sync_hierarchy();
    }

    pub fn predicates(&self) -> &BTreeMap<Symbol, Vec<Sort>> {
        &self.predicates
    }

    pub fn functions(&self) -> &BTreeMap<Symbol, FunctionDecl> {
        &self.functions
    }

    pub fn predicate(&self, p: &Symbol) -> Option<&[Sort]> {
        self.predicates.get(p).map(Vec::as_slice)
    }

    pub fn function(&self, f: &Symbol) -> Option<&FunctionDecl> {
        self.functions.get(f)
    }

    pub fn is_sort_predicate(&self, p: &Symbol) -> bool {
        let s = Sort::new(p.name());
        !s.is_top() && !s.is_bottom() && self.hierarchy.contains(&s)
    }

    /// Witness constants named by the sort module.
    pub fn is_witness(&self, c: &Symbol) -> bool {
        self.hierarchy.witnesses().values().any(|cs| cs.contains(c))
    }

    /// Symbols shared by every agent: sort predicates and witness constants.
    pub fn global_symbols(&self) -> BTreeSet<Symbol> {
        let mut out: BTreeSet<Symbol> = self.predicates.keys().filter(|p| self.is_sort_predicate(p)).cloned().collect();
        for cs in self.hierarchy.witnesses().values() {
            out.extend(cs.iter().cloned());
        }
        out
    }

    pub fn is_declared(&self, name: &str) -> bool {
        let s = Symbol::new(name);
        self.predicates.contains_key(&s) || self.functions.contains_key(&s)
    }

    pub fn declare_predicate(&mut self, name: Symbol, args: Vec<Sort>) -> Result<(), SyntaxError> {
        if self.is_sort_predicate(&name) {
            return Err(SyntaxError::ReservedName(name));
        }
        for s in &args {
            self.require_sort(s)?;
        }
        if self.functions.contains_key(&name) {
            return Err(SyntaxError::Redeclared(name));
        }
        match self.predicates.get(&name) {
            Some(old) if *old != args => Err(SyntaxError::Redeclared(name)),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(name, args);
                Ok(())
            }
        }
    }

    pub fn declare_function(&mut self, name: Symbol, args: Vec<Sort>, result: Sort) -> Result<(), SyntaxError> {
        if self.hierarchy.contains(&Sort::new(name.name())) {
            return Err(SyntaxError::ReservedName(name));
        }
        for s in args.iter().chain(core::iter::once(&result)) {
            self.require_sort(s)?;
        }
        if self.predicates.contains_key(&name) {
            return Err(SyntaxError::Redeclared(name));
        }
        let decl = FunctionDecl { args, result };
        match self.functions.get(&name) {
            Some(old) if *old != decl => Err(SyntaxError::Redeclared(name)),
            Some(_) => Ok(()),
            None => {
                self.functions.insert(name, decl);
                Ok(())
            }
        }
    }

    fn require_sort(&self, s: &Sort) -> Result<(), SyntaxError> {
        if self.hierarchy.contains(s) {
            Ok(())
        } else {
            Err(SortError::Unknown(s.clone()).into())
        }
    }

    /// `[t]`: the sort of a variable, or the declared result sort.
    pub fn sort_of(&self, t: &Term) -> Result<Sort, SyntaxError> {
        match t {
            Term::Var(v) => {
                self.require_sort(&v.sort)?;
                Ok(v.sort.clone())
            }
            Term::App(f, _) => self
                .functions
                .get(f)
                .map(|d| d.result.clone())
                .ok_or_else(|| SyntaxError::UndeclaredFunction(f.clone())),
        }
    }

    fn check_args(&self, symbol: &Symbol, expected: &[Sort], args: &[Term]) -> Result<(), SyntaxError> {
        if expected.len() != args.len() {
            return Err(SyntaxError::Arity { symbol: symbol.clone(), expected: expected.len(), found: args.len() });
        }
        for (i, (want, arg)) in expected.iter().zip(args).enumerate() {
            self.check_term(arg)?;
            let actual = self.sort_of(arg)?;
            if !self.hierarchy.le(&actual, want) {
                return Err(SyntaxError::IllSorted {
                    symbol: symbol.clone(),
                    position: i + 1,
                    expected: want.clone(),
                    actual,
                });
            }
        }
        Ok(())
    }

    pub fn check_term(&self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(v) => self.require_sort(&v.sort),
            Term::App(f, args) => {
                let decl = self.functions.get(f).ok_or_else(|| SyntaxError::UndeclaredFunction(f.clone()))?;
                self.check_args(f, &decl.args, args)
            }
        }
    }

    pub fn check_atom(&self, a: &Atom) -> Result<(), SyntaxError> {
        let decl =
            self.predicates.get(&a.predicate).ok_or_else(|| SyntaxError::UndeclaredPredicate(a.predicate.clone()))?;
        self.check_args(&a.predicate, decl, &a.args)
    }

    pub fn check_literal(&self, l: &Literal) -> Result<(), SyntaxError> {
        self.check_atom(&l.atom)
    }

    pub fn check_clause(&self, c: &Clause) -> Result<(), SyntaxError> {
        c.literals().iter().try_for_each(|l| self.check_literal(l))
    }

    pub fn check_formula(&self, f: &Formula) -> Result<(), SyntaxError> {
        match f {
            Formula::Atom(a) => self.check_atom(a),
            Formula::Not(g) => self.check_formula(g),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().try_for_each(|g| self.check_formula(g)),
            Formula::Implies(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Quant(_, v, body) => {
                self.check_variable(v)?;
                self.check_formula(body)
            }
        }
    }

    pub fn check_variable(&self, v: &Variable) -> Result<(), SyntaxError> {
        self.require_sort(&v.sort)
    }

    /// Sorts with no ground term, computed as a fixpoint over the function
    /// declarations. `TOP`, `BOTTOM` and synthetic sorts are not reported.
    pub fn uninhabited_sorts(&self) -> Vec<Sort> {
        let h = &self.hierarchy;
        let mut inhabited: BTreeSet<Sort> = BTreeSet::new();
        let has_member = |s: &Sort, inhabited: &BTreeSet<Sort>| inhabited.iter().any(|t| h.le(t, s));
        loop {
            let mut changed = false;
            for d in self.functions.values() {
                if !inhabited.contains(&d.result) && d.args.iter().all(|a| has_member(a, &inhabited)) {
                    inhabited.insert(d.result.clone());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        h.sorts()
            .iter()
            .filter(|s| !s.is_top() && !s.is_bottom() && !h.is_synthetic(s))
            .filter(|s| !has_member(s, &inhabited))
            .cloned()
            .collect()
    }

    pub fn check_inhabited(&self) -> Result<(), SyntaxError> {
        match self.uninhabited_sorts().into_iter().next() {
            Some(s) => Err(SyntaxError::Uninhabited(s)),
            None => Ok(()),
        }
    }
}
