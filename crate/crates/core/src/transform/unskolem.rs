//! Un-Skolemization of clause sets whose Skolem expressions are
//! acceptable.
//!
//! A set of symbols is acceptable for a clause set when, in every clause,
//! (i) each expression headed by one of the symbols has pairwise distinct
//! variables as arguments, (ii) the argument set of an m-ary expression is
//! contained in that of every co-occurring n-ary expression with m ≤ n,
//! and (iii) no two different expressions share a head symbol.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use super::normal::conj;
use crate::subst::{rename_away, Substitution};
use crate::syntax::{Clause, Formula, Literal, Quantifier, Signature, Symbol, Term, Variable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// 1, 2 or 3.
    pub condition: u8,
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roman = ["i", "ii", "iii"].get(usize::from(self.condition).saturating_sub(1)).copied().unwrap_or("?");
        write!(f, "condition ({roman}) fails in `{}`: {}", self.clause, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnskolemError {
    #[error("{0}")]
    Unacceptable(Violation),
    #[error("step 3: cannot merge the `{symbol}` expressions: {detail}")]
    Merge { symbol: Symbol, detail: String },
    #[error("step 4: cannot align the arguments of `{symbol}`: {detail}")]
    Align { symbol: Symbol, detail: String },
    #[error("no declaration for Skolem symbol `{0}`")]
    UnknownSymbol(Symbol),
}

/// A block of clauses under one quantifier prefix, read as
/// `Q. (C1 ∧ ... ∧ Cn)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantifiedClauses {
    pub prefix: Vec<(Quantifier, Variable)>,
    pub clauses: Vec<Clause>,
    /// The variable renaming found in the merge and alignment steps.
    pub renaming: Substitution,
}

impl QuantifiedClauses {
    pub fn to_formula(&self) -> Formula {
        let body = conj(self.clauses.iter().map(Formula::from_clause).collect());
        self.prefix.iter().rev().fold(body, |acc, (q, v)| Formula::Quant(*q, v.clone(), alloc::boxed::Box::new(acc)))
    }

    pub fn existentials(&self) -> impl Iterator<Item = &Variable> {
        self.prefix.iter().filter(|(q, _)| *q == Quantifier::Exists).map(|(_, v)| v)
    }
}

impl fmt::Display for QuantifiedClauses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// Expressions headed by a symbol of `skolems`, outermost first, in
/// order of occurrence.
fn skolem_terms<'a>(c: &'a Clause, skolems: &BTreeSet<Symbol>) -> Vec<&'a Term> {
    fn walk<'a>(t: &'a Term, skolems: &BTreeSet<Symbol>, out: &mut Vec<&'a Term>) {
        if let Term::App(f, args) = t {
            if skolems.contains(f) {
                out.push(t);
            }
            args.iter().for_each(|a| walk(a, skolems, out));
        }
    }
    let mut out = Vec::new();
    for l in c.literals() {
        l.atom.args.iter().for_each(|t| walk(t, skolems, &mut out));
    }
    out
}

fn var_args(t: &Term) -> Option<Vec<Variable>> {
    match t {
        Term::App(_, args) => args.iter().map(|a| a.as_var().cloned()).collect(),
        Term::Var(_) => None,
    }
}

/// Checks conditions (i)-(iii) clause by clause.
pub fn check_acceptable(clauses: &[Clause], skolems: &BTreeSet<Symbol>) -> Result<(), Violation> {
    for c in clauses {
        let terms = skolem_terms(c, skolems);
        let violation = |condition: u8, detail: String| Violation { condition, clause: c.clone(), detail };
        let mut seen: BTreeMap<&Symbol, &Term> = BTreeMap::new();
        let mut exprs: Vec<(&Term, BTreeSet<Variable>)> = Vec::new();
        for t in terms {
            let Term::App(f, _) = t else { continue };
            let Some(args) = var_args(t) else {
                return Err(violation(1, format!("`{t}` has a non-variable argument")));
            };
            let set: BTreeSet<Variable> = args.iter().cloned().collect();
            if set.len() != args.len() {
                return Err(violation(1, format!("`{t}` repeats an argument")));
            }
            match seen.get(f) {
                Some(prev) if *prev != t => {
                    return Err(violation(3, format!("`{prev}` and `{t}` share the head `{f}`")));
                }
                Some(_) => {}
                None => {
                    seen.insert(f, t);
                    exprs.push((t, set));
                }
            }
        }
        for (a, sa) in &exprs {
            for (b, sb) in &exprs {
                if sa.len() <= sb.len() && !sa.is_subset(sb) {
                    return Err(violation(2, format!("arguments of `{a}` are not among those of `{b}`")));
                }
            }
        }
    }
    Ok(())
}

/// Un-Skolemizes `clauses` with respect to `skolems`. Clauses are
/// partitioned by shared Skolem symbols; each partition yields one
/// quantified block. Blocks that become valid are omitted.
pub fn unskolemize(
    clauses: &[Clause],
    skolems: &BTreeSet<Symbol>,
    sig: &Signature,
) -> Result<Vec<QuantifiedClauses>, UnskolemError> {
    check_acceptable(clauses, skolems).map_err(UnskolemError::Unacceptable)?;
    let mut out = Vec::new();
    for part in partition(clauses, skolems) {
        let members: Vec<Clause> = part.into_iter().map(|i| clauses[i].clone()).collect();
        if let Some(block) = unskolemize_partition(&members, skolems, sig)? {
            out.push(block);
        }
    }
    Ok(out)
}

/// Groups clause indices so that no two groups share a Skolem symbol.
/// Groups are ordered by their first clause.
pub fn partition(clauses: &[Clause], skolems: &BTreeSet<Symbol>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..clauses.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let n = p[j];
            p[j] = r;
            j = n;
        }
        r
    }
    let mut owner: BTreeMap<Symbol, usize> = BTreeMap::new();
    for (i, c) in clauses.iter().enumerate() {
        for f in c.functions().intersection(skolems) {
            match owner.get(f) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
                None => {
                    owner.insert(f.clone(), i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..clauses.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Union-find over variables; the representative of a class is its
/// member with the earliest first occurrence unless forced otherwise.
struct Classes {
    parent: BTreeMap<Variable, Variable>,
    order: BTreeMap<Variable, usize>,
}

impl Classes {
    fn find(&self, v: &Variable) -> Variable {
        let mut cur = v.clone();
        while let Some(p) = self.parent.get(&cur) {
            cur = p.clone();
        }
        cur
    }

    fn union(&mut self, a: &Variable, b: &Variable) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.order[&ra] <= self.order[&rb] {
            self.parent.insert(rb, ra);
        } else {
            self.parent.insert(ra, rb);
        }
    }

    fn union_into(&mut self, child: &Variable, rep: &Variable) {
        let (rc, rr) = (self.find(child), self.find(rep));
        if rc != rr {
            self.parent.insert(rc, rr);
        }
    }
}

fn unskolemize_partition(
    input: &[Clause],
    skolems: &BTreeSet<Symbol>,
    sig: &Signature,
) -> Result<Option<QuantifiedClauses>, UnskolemError> {
    // Step 2: rename apart.
    let mut taken = BTreeSet::new();
    let clauses: Vec<Clause> = input.iter().map(|c| rename_away(c, &mut taken)).collect();

    let mut origin: BTreeMap<Variable, usize> = BTreeMap::new();
    let mut order: BTreeMap<Variable, usize> = BTreeMap::new();
    for (i, c) in clauses.iter().enumerate() {
        for v in c.variables() {
            origin.insert(v.clone(), i);
            let n = order.len();
            order.entry(v).or_insert(n);
        }
    }

    // One expression per clause and symbol; symbols by first occurrence.
    let mut symbols: Vec<Symbol> = Vec::new();
    let mut exprs: BTreeMap<Symbol, Vec<Vec<Variable>>> = BTreeMap::new();
    for c in &clauses {
        let mut here = BTreeSet::new();
        for t in skolem_terms(c, skolems) {
            let Term::App(f, _) = t else { continue };
            if !here.insert(f.clone()) {
                continue;
            }
            if !exprs.contains_key(f) {
                symbols.push(f.clone());
            }
            exprs.entry(f.clone()).or_default().push(var_args(t).unwrap_or_default());
        }
    }

    let mut classes = Classes { parent: BTreeMap::new(), order };

    // Step 3: one expression per symbol.
    for f in &symbols {
        let tuples = &exprs[f];
        let first = &tuples[0];
        for other in &tuples[1..] {
            for (a, b) in first.iter().zip(other) {
                let (ra, rb) = (classes.find(a), classes.find(b));
                if ra.sort != rb.sort {
                    return Err(UnskolemError::Merge {
                        symbol: f.clone(),
                        detail: format!("{ra} and {rb} have different sorts"),
                    });
                }
                classes.union(&ra, &rb);
            }
        }
        check_classes(&classes, &origin).map_err(|detail| UnskolemError::Merge { symbol: f.clone(), detail })?;
    }

    // Step 4: argument sets form a chain ordered by arity.
    let mut by_arity: BTreeMap<usize, Vec<Symbol>> = BTreeMap::new();
    for f in &symbols {
        by_arity.entry(exprs[f][0].len()).or_default().push(f.clone());
    }
    let mut chain: Vec<Variable> = Vec::new();
    for group in by_arity.values() {
        for (idx, f) in group.iter().enumerate() {
            let args: Vec<Variable> = exprs[f][0].iter().map(|v| classes.find(v)).collect();
            let target: Vec<Variable> = chain.iter().map(|v| classes.find(v)).collect();
            let missing: Vec<Variable> = target.iter().filter(|v| !args.contains(v)).cloned().collect();
            let mut extra: Vec<Variable> = args.iter().filter(|v| !target.contains(v)).cloned().collect();
            extra.sort_by_key(|v| classes.order[v]);
            let mut used = vec![false; extra.len()];
            for m in &missing {
                let Some(j) = (0..extra.len()).find(|&j| !used[j] && extra[j].sort == m.sort) else {
                    return Err(UnskolemError::Align {
                        symbol: f.clone(),
                        detail: format!("no argument of sort {} to match {m}", m.sort),
                    });
                };
                used[j] = true;
                classes.union_into(&extra[j], m);
            }
            if idx == 0 {
                chain = target;
                chain.extend(extra.iter().zip(&used).filter(|(_, u)| !**u).map(|(v, _)| v.clone()));
            } else if used.iter().any(|u| !u) {
                return Err(UnskolemError::Align {
                    symbol: f.clone(),
                    detail: String::from("argument set differs from another expression of the same arity"),
                });
            }
            check_classes(&classes, &origin).map_err(|detail| UnskolemError::Align { symbol: f.clone(), detail })?;
        }
    }

    let renaming: Substitution = origin
        .keys()
        .filter_map(|v| {
            let r = classes.find(v);
            (r != *v).then(|| (v.clone(), Term::Var(r)))
        })
        .collect();
    let clauses: Vec<Clause> = clauses.iter().map(|c| renaming.apply_clause(c)).collect();
    let chain: Vec<Variable> = chain.iter().map(|v| classes.find(v)).collect();

    // Step 5: prefix and replacement.
    let mut names: BTreeSet<Symbol> = clauses.iter().flat_map(|c| c.variables()).map(|v| v.name).collect();
    let mut prefix = Vec::new();
    let mut replace: BTreeMap<Term, Variable> = BTreeMap::new();
    let mut counter = 0usize;
    for pos in 0..=chain.len() {
        if pos > 0 {
            prefix.push((Quantifier::Forall, chain[pos - 1].clone()));
        }
        for f in symbols.iter().filter(|f| exprs[*f][0].len() == pos) {
            let decl = sig.function(f).ok_or_else(|| UnskolemError::UnknownSymbol(f.clone()))?;
            let name = loop {
                counter += 1;
                let candidate = Symbol::new(&format!("v{counter}"));
                if !names.contains(&candidate) {
                    break candidate;
                }
            };
            names.insert(name.clone());
            let v = Variable { name, sort: decl.result.clone() };
            let args = exprs[f][0].iter().map(|a| Term::Var(classes.find(a))).collect();
            replace.insert(Term::App(f.clone(), args), v.clone());
            prefix.push((Quantifier::Exists, v));
        }
    }
    for c in &clauses {
        for v in c.variables() {
            if !chain.contains(&v) && !prefix.iter().any(|(_, p)| *p == v) {
                prefix.push((Quantifier::Forall, v));
            }
        }
    }

    let body: Vec<Clause> = clauses
        .iter()
        .map(|c| {
            Clause::new(
                c.literals()
                    .iter()
                    .map(|l| Literal {
                        atom: crate::syntax::Atom {
                            predicate: l.atom.predicate.clone(),
                            args: l.atom.args.iter().map(|t| replace_terms(t, &replace)).collect(),
                        },
                        positive: l.positive,
                    })
                    .collect(),
            )
        })
        .filter(|c| !has_valid_sort_literal(c, sig))
        .collect();
    if body.is_empty() {
        return Ok(None);
    }
    Ok(Some(QuantifiedClauses { prefix, clauses: body, renaming }))
}

fn check_classes(classes: &Classes, origin: &BTreeMap<Variable, usize>) -> Result<(), String> {
    let mut seen: BTreeMap<(usize, Variable), Variable> = BTreeMap::new();
    for (v, &i) in origin {
        let r = classes.find(v);
        if let Some(prev) = seen.insert((i, r), v.clone()) {
            return Err(format!("{prev} and {v} of one clause would be identified"));
        }
    }
    Ok(())
}

fn replace_terms(t: &Term, map: &BTreeMap<Term, Variable>) -> Term {
    if let Some(v) = map.get(t) {
        return Term::Var(v.clone());
    }
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| replace_terms(a, map)).collect()),
    }
}

/// A positive sort literal `s(t)` with `[t] ⪯ s` makes a clause valid.
pub fn has_valid_sort_literal(c: &Clause, sig: &Signature) -> bool {
    c.literals().iter().any(|l| {
        l.positive
            && sig.is_sort_predicate(&l.atom.predicate)
            && l.atom.args.len() == 1
            && sig
                .sort_of(&l.atom.args[0])
                .map(|s| sig.hierarchy().le(&s, &crate::sorts::Sort::new(l.atom.predicate.name())))
                .unwrap_or(false)
    })
}
