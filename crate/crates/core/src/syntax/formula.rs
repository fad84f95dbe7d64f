use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use super::{Atom, Clause, Literal, Symbol, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        })
    }
}

/// A sorted first-order formula. `And(vec![])` is truth and `Or(vec![])`
/// is falsity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Variable, Box<Formula>),
}

impl Formula {
    pub fn truth() -> Self {
        Formula::And(Vec::new())
    }

    pub fn falsity() -> Self {
        Formula::Or(Vec::new())
    }

    pub fn negation(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: impl IntoIterator<Item = Variable>, body: Formula) -> Self {
        Self::quantify(Quantifier::Forall, vars, body)
    }

    pub fn exists(vars: impl IntoIterator<Item = Variable>, body: Formula) -> Self {
        Self::quantify(Quantifier::Exists, vars, body)
    }

    pub fn quantify(q: Quantifier, vars: impl IntoIterator<Item = Variable>, body: Formula) -> Self {
        let vars: Vec<Variable> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::Quant(q, v, Box::new(acc)))
    }

    pub fn literal(l: &Literal) -> Self {
        let a = Formula::Atom(l.atom.clone());
        if l.positive {
            a
        } else {
            Formula::negation(a)
        }
    }

    /// The disjunction of a clause's literals, without quantifiers.
    pub fn from_clause(c: &Clause) -> Self {
        match c.literals() {
            [l] => Formula::literal(l),
            lits => Formula::Or(lits.iter().map(Formula::literal).collect()),
        }
    }

    /// Universal closure of a clause, quantifying variables in order of
    /// first occurrence.
    pub fn closure_of(c: &Clause) -> Self {
        Formula::forall(c.variables(), Formula::from_clause(c))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Variable>, out: &mut Vec<Variable>) {
        match self {
            Formula::Atom(a) => {
                let mut vs = Vec::new();
                a.collect_vars(&mut vs);
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable occurring anywhere, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Formula::Atom(a) => {
                let mut vs = Vec::new();
                a.collect_vars(&mut vs);
                out.extend(vs);
            }
            Formula::Not(f) => f.all_vars(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.all_vars(out)),
            Formula::Implies(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::Quant(_, v, body) => {
                out.insert(v.clone());
                body.all_vars(out);
            }
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(g) => g.visit_atoms(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_atoms(f)),
            Formula::Implies(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Formula::Quant(_, _, body) => body.visit_atoms(f),
        }
    }

    pub fn predicates(&self) -> BTreeSet<Symbol> {
        self.atoms().into_iter().map(|a| a.predicate.clone()).collect()
    }

    pub fn functions(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            a.args.iter().for_each(|t| t.collect_functions(&mut out));
        }
        out
    }

    /// Non-logical symbols of the formula.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = self.functions();
        out.extend(self.predicates());
        out
    }

    pub fn has_quantifier(&self, q: Quantifier) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Not(f) => f.has_quantifier(q),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|f| f.has_quantifier(q)),
            Formula::Implies(a, b) => a.has_quantifier(q) || b.has_quantifier(q),
            Formula::Quant(p, _, body) => *p == q || body.has_quantifier(q),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Quant(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(fs) if fs.len() > 1 => 2,
            Formula::And(fs) if fs.len() > 1 => 3,
            Formula::Or(fs) | Formula::And(fs) if fs.len() == 1 => fs[0].precedence(),
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => {
                f.write_str("~")?;
                g.write_at(f, 4)
            }
            Formula::And(fs) if fs.is_empty() => f.write_str("true"),
            Formula::Or(fs) if fs.is_empty() => f.write_str("false"),
            Formula::And(fs) | Formula::Or(fs) if fs.len() == 1 => fs[0].write_at(f, min),
            Formula::And(fs) => write_joined(f, fs, " & ", 4),
            Formula::Or(fs) => write_joined(f, fs, " | ", 3),
            Formula::Implies(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" -> ")?;
                b.write_at(f, 1)
            }
            Formula::Quant(q, v, body) => {
                write!(f, "{q} {v}")?;
                let mut body = &**body;
                while let Formula::Quant(q2, v2, inner) = body {
                    if q2 != q {
                        break;
                    }
                    write!(f, " {v2}")?;
                    body = inner;
                }
                f.write_str(". ")?;
                body.write_at(f, 0)
            }
        }
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, fs: &[Formula], sep: &str, min: u8) -> fmt::Result {
    for (i, g) in fs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        g.write_at(f, min)?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
