//! Well-sorted terms, atoms, literals and clauses.

mod formula;
mod signature;

pub use formula::{Formula, Quantifier};
pub use signature::{FunctionDecl, Signature, SyntaxError};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::sorts::Sort;

/// Predicate, function, constant or variable name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// A restricted variable `x:s`. The same name at two sorts is two variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub name: Symbol,
    pub sort: Sort,
}

impl Variable {
    pub fn new(name: &str, sort: Sort) -> Self {
        Variable { name: Symbol::new(name), sort }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Variable),
    /// Function application; constants have no arguments.
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str, sort: &str) -> Self {
        Term::Var(Variable::new(name, Sort::new(sort)))
    }

    pub fn constant(name: &str) -> Self {
        Term::App(Symbol::new(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Self {
        Term::App(Symbol::new(name), args)
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurs(&self, v: &Variable) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Variable>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn collect_functions(&self, out: &mut BTreeSet<Symbol>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Nesting depth; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| 1 + a.depth()).max().unwrap_or(0),
        }
    }

    /// Replaces variables according to `map`, leaving others untouched.
    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename(map)).collect()),
        }
    }

    /// Every subterm, outermost first.
    pub fn subterms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        out.push(self);
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.subterms(out));
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) => {
                write!(f, "{s}")?;
                write_args(f, args)
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

/// `p(t1, ..., tn)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom { predicate: Symbol::new(predicate), args }
    }

    pub fn collect_vars(&self, out: &mut Vec<Variable>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> Atom {
        Atom { predicate: self.predicate.clone(), args: self.args.iter().map(|a| a.rename(map)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        write_args(f, &self.args)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A signed atom. Ordered by atom first so complementary literals sit
/// next to each other in a clause.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { atom, positive: false }
    }

    pub fn negated(&self) -> Literal {
        Literal { atom: self.atom.clone(), positive: !self.positive }
    }

    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> Literal {
        Literal { atom: self.atom.rename(map), positive: self.positive }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite set of literals, kept sorted and duplicate free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(mut literals: Vec<Literal>) -> Self {
        literals.sort();
        literals.dedup();
        Clause { literals }
    }

    pub fn empty() -> Self {
        Clause { literals: Vec::new() }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn into_literals(self) -> Vec<Literal> {
        self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.literals.iter().for_each(|l| l.atom.collect_vars(&mut out));
        out
    }

    pub fn predicates(&self) -> BTreeSet<Symbol> {
        self.literals.iter().map(|l| l.atom.predicate.clone()).collect()
    }

    /// Function and constant symbols.
    pub fn functions(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.atom.args.iter().for_each(|a| a.collect_functions(&mut out));
        }
        out
    }

    /// All non-logical symbols: predicates, functions and constants.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = self.functions();
        out.extend(self.predicates());
        out
    }

    /// Contains `L` and `~L` for a syntactically identical atom.
    pub fn is_tautology(&self) -> bool {
        self.literals.windows(2).any(|w| w[0].atom == w[1].atom && w[0].positive != w[1].positive)
    }

    /// Literal count, then total term size.
    pub fn weight(&self) -> (usize, usize) {
        let size = self.literals.iter().map(|l| 1 + l.atom.args.iter().map(Term::size).sum::<usize>()).sum();
        (self.literals.len(), size)
    }

    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> Clause {
        Clause::new(self.literals.iter().map(|l| l.rename(map)).collect())
    }

    pub fn without(&self, index: usize) -> Vec<Literal> {
        self.literals.iter().enumerate().filter(|(i, _)| *i != index).map(|(_, l)| l.clone()).collect()
    }

    /// Renames variables to short readable names: generated names lose
    /// their prefix and numeric suffixes are dropped where no clash
    /// results. The renaming is injective.
    pub fn tidy(&self) -> Clause {
        let vars = self.variables();
        let mut used: BTreeSet<String> = BTreeSet::new();
        let mut map = BTreeMap::new();
        for v in vars {
            let stem = stem_of(&v);
            let mut name = stem.clone();
            let mut k = 1;
            while used.contains(&name) {
                name = alloc::format!("{stem}_{k}");
                k += 1;
            }
            used.insert(name.clone());
            if name != v.name.name() {
                map.insert(v.clone(), Variable::new(&name, v.sort.clone()));
            }
        }
        if map.is_empty() {
            self.clone()
        } else {
            self.rename(&map)
        }
    }
}

fn stem_of(v: &Variable) -> String {
    let name = v.name.name();
    if name.starts_with('_') || name.is_empty() {
        if v.sort.is_top() {
            return "x".to_string();
        }
        let first = v.sort.name().chars().next().unwrap_or('x').to_ascii_lowercase();
        let first = if first.is_ascii_alphabetic() { first } else { 'x' };
        return alloc::format!("{first}");
    }
    if let Some(pos) = name.rfind('_') {
        let suffix = &name[pos + 1..];
        if pos > 0 && !suffix.is_empty() && suffix.bytes().all(|b| b.is_ascii_digit()) {
            return name[..pos].to_string();
        }
    }
    name.to_string()
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("[]");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Source of fresh names with a reserved prefix and a monotone counter.
#[derive(Debug, Clone)]
pub struct NameSupply {
    prefix: String,
    next: u64,
}

impl NameSupply {
    pub fn new(prefix: &str) -> Self {
        NameSupply { prefix: prefix.to_string(), next: 1 }
    }

    /// Next name for which `taken` is false.
    pub fn fresh(&mut self, taken: impl Fn(&str) -> bool) -> Symbol {
        loop {
            let name = alloc::format!("{}{}", self.prefix, self.next);
            self.next += 1;
            if !taken(&name) {
                return Symbol::new(&name);
            }
        }
    }

    pub fn fresh_var(&mut self, sort: &Sort, taken: &BTreeSet<Symbol>) -> Variable {
        let name = self.fresh(|n| taken.iter().any(|t| t.name() == n));
        Variable { name, sort: sort.clone() }
    }
}
