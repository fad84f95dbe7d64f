//! Sorted Skolemization and clause-form conversion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::normal::{conj, prenex, substitute_matrix, Prenex};
use crate::sorts::Sort;
use crate::syntax::{
    Atom, Clause, Formula, Literal, NameSupply, Quantifier, Signature, Symbol, SyntaxError, Term, Variable,
};

/// A Skolem symbol's profile and the agent that minted it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemEntry {
    pub args: Vec<Sort>,
    pub result: Sort,
    pub owner: Option<Symbol>,
}

/// Fresh Skolem symbols `SK1`, `SK2`, ... for one proving session.
#[derive(Debug, Clone)]
pub struct SkolemTable {
    supply: NameSupply,
    entries: BTreeMap<Symbol, SkolemEntry>,
}

impl Default for SkolemTable {
    fn default() -> Self {
        SkolemTable::new()
    }
}

impl SkolemTable {
    pub fn new() -> Self {
        SkolemTable { supply: NameSupply::new("SK"), entries: BTreeMap::new() }
    }

    pub fn entries(&self) -> &BTreeMap<Symbol, SkolemEntry> {
        &self.entries
    }

    pub fn get(&self, f: &Symbol) -> Option<&SkolemEntry> {
        self.entries.get(f)
    }

    pub fn contains(&self, f: &Symbol) -> bool {
        self.entries.contains_key(f)
    }

    /// Mints a symbol unused in `sig` and in this table, and declares it.
    pub fn mint(
        &mut self,
        sig: &mut Signature,
        args: Vec<Sort>,
        result: Sort,
        owner: Option<&Symbol>,
    ) -> Result<Symbol, SyntaxError> {
        let entries = &self.entries;
        let name = self.supply.fresh(|n| {
            sig.is_declared(n) || sig.hierarchy().contains(&Sort::new(n)) || entries.contains_key(&Symbol::new(n))
        });
        sig.declare_function(name.clone(), args.clone(), result.clone())?;
        self.entries.insert(name.clone(), SkolemEntry { args, result, owner: owner.cloned() });
        Ok(name)
    }
}

/// Removes the existential quantifiers of a prenex formula. Each `∃y:s`
/// becomes a fresh function of the enclosing universals with result sort
/// `s`; for `s` other than `TOP` the matrix also gains the conjunct
/// `s(f(x̄))`. Returns the universal prefix and the new matrix.
pub fn skolemize_prenex(
    p: &Prenex,
    sig: &mut Signature,
    table: &mut SkolemTable,
    owner: Option<&Symbol>,
) -> Result<Prenex, SyntaxError> {
    let mut universals: Vec<Variable> = Vec::new();
    let mut map: BTreeMap<Variable, Term> = BTreeMap::new();
    let mut sort_atoms = Vec::new();
    for (q, v) in &p.prefix {
        match q {
            Quantifier::Forall => universals.push(v.clone()),
            Quantifier::Exists => {
                let args: Vec<Sort> = universals.iter().map(|u| u.sort.clone()).collect();
                let f = table.mint(sig, args, v.sort.clone(), owner)?;
                let term = Term::App(f, universals.iter().cloned().map(Term::Var).collect());
                if !v.sort.is_top() {
                    sort_atoms.push(Formula::Atom(Atom::new(v.sort.name(), alloc::vec![term.clone()])));
                }
                map.insert(v.clone(), term);
            }
        }
    }
    let mut parts = alloc::vec![substitute_matrix(&p.matrix, &map)];
    parts.extend(sort_atoms);
    Ok(Prenex { prefix: universals.into_iter().map(|v| (Quantifier::Forall, v)).collect(), matrix: conj(parts) })
}

/// Skolemizes a closed formula, returning an existential-free prenex
/// formula.
pub fn skolemize(
    f: &Formula,
    sig: &mut Signature,
    table: &mut SkolemTable,
    owner: Option<&Symbol>,
) -> Result<Formula, SyntaxError> {
    Ok(skolemize_prenex(&prenex(f), sig, table, owner)?.to_formula())
}

/// Clause form of a formula: negation normal form, prenex form,
/// Skolemization and distribution. Free variables are read universally.
/// Tautologies are dropped; falsity yields the empty clause.
pub fn clausify(
    f: &Formula,
    sig: &mut Signature,
    table: &mut SkolemTable,
    owner: Option<&Symbol>,
) -> Result<Vec<Clause>, SyntaxError> {
    let sk = skolemize_prenex(&prenex(f), sig, table, owner)?;
    let mut out: Vec<Clause> = Vec::new();
    let mut seen = BTreeSet::new();
    for lits in cnf(&sk.matrix) {
        let c = Clause::new(lits);
        if !c.is_tautology() && seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Distributes a quantifier-free formula in negation normal form into a
/// list of literal lists.
pub fn cnf(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::Atom(a) => alloc::vec![alloc::vec![Literal::pos(a.clone())]],
        Formula::Not(g) => match &**g {
            Formula::Atom(a) => alloc::vec![alloc::vec![Literal::neg(a.clone())]],
            other => cnf(&super::normal::nnf(&Formula::negation(other.clone()))),
        },
        Formula::And(gs) => gs.iter().flat_map(cnf).collect(),
        Formula::Or(gs) => {
            let mut acc: Vec<Vec<Literal>> = alloc::vec![Vec::new()];
            for g in gs {
                let part = cnf(g);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for b in &part {
                        let mut c = a.clone();
                        c.extend(b.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        Formula::Implies(..) | Formula::Quant(..) => cnf(&super::normal::nnf(f)),
    }
}
