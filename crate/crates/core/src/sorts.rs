//! The sort hierarchy: a finite partial order with a greatest sort `TOP`
//! and a least sort `BOTTOM`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Clause, Symbol, Term};

/// Reserved name of the greatest sort.
pub const TOP: &str = "TOP";
/// Reserved name of the least (empty) sort.
pub const BOTTOM: &str = "BOTTOM";

/// Name of a sort.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(Arc<str>);

impl Sort {
    pub fn new(name: &str) -> Self {
        Sort(Arc::from(name))
    }

    pub fn top() -> Self {
        Sort::new(TOP)
    }

    pub fn bottom() -> Self {
        Sort::new(BOTTOM)
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_top(&self) -> bool {
        &*self.0 == TOP
    }

    pub fn is_bottom(&self) -> bool {
        &*self.0 == BOTTOM
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Sort {
    fn from(s: &str) -> Self {
        Sort::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("unknown sort `{0}`")]
    Unknown(Sort),
    #[error("sorts `{0}` and `{1}` are each below the other")]
    Antisymmetry(Sort, Sort),
    #[error("sort `{0}` has no witness ground term")]
    Uninhabited(Sort),
    #[error("sorts {sorts:?} have no unique greatest lower bound (maximal lower bounds {maximal:?})")]
    NoUniqueGlb { sorts: Vec<Sort>, maximal: Vec<Sort> },
    #[error("greatest lower bound of an empty set of sorts")]
    EmptyGlb,
    #[error("unsupported sort module clause `{0}`; expected `~s1(x) | s2(x)` or `s(c)`")]
    UnsupportedClause(String),
}

/// A finite partial order of sorts.
///
/// Sorts are indexed; `TOP` is index 0 and `BOTTOM` index 1. The reflexive
/// transitive closure is stored as a dense boolean matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct SortHierarchy {
    sorts: Vec<Sort>,
    index: BTreeMap<Sort, usize>,
    edges: Vec<(Sort, Sort)>,
    leq: Vec<bool>,
    witnesses: BTreeMap<Sort, BTreeSet<Symbol>>,
    synthetic: BTreeSet<Sort>,
}

impl fmt::Debug for SortHierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SortHierarchy")
            .field("sorts", &self.sorts)
            .field("edges", &self.edges)
            .field("synthetic", &self.synthetic)
            .finish()
    }
}

impl Default for SortHierarchy {
    fn default() -> Self {
        SortHierarchy::new(core::iter::empty(), core::iter::empty()).expect("two-element hierarchy")
    }
}

impl SortHierarchy {
    /// Builds the hierarchy from declared sorts and `(sub, super)` edges.
    /// Sorts mentioned only in edges are declared implicitly.
    pub fn new(
        sorts: impl IntoIterator<Item = Sort>,
        edges: impl IntoIterator<Item = (Sort, Sort)>,
    ) -> Result<Self, SortError> {
        let mut all = Vec::new();
        let mut index = BTreeMap::new();
        let declare = |s: Sort, all: &mut Vec<Sort>, index: &mut BTreeMap<Sort, usize>| {
            if !index.contains_key(&s) {
                index.insert(s.clone(), all.len());
                all.push(s);
            }
        };
        declare(Sort::top(), &mut all, &mut index);
        declare(Sort::bottom(), &mut all, &mut index);
        for s in sorts {
            declare(s, &mut all, &mut index);
        }
        let edges: Vec<(Sort, Sort)> = edges.into_iter().collect();
        for (a, b) in &edges {
            declare(a.clone(), &mut all, &mut index);
            declare(b.clone(), &mut all, &mut index);
        }
        let n = all.len();
        let mut leq = alloc::vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
            leq[i * n] = true; // i <= TOP
            leq[n + i] = true; // BOTTOM <= i
        }
        for (a, b) in &edges {
            leq[index[a] * n + index[b]] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(SortError::Antisymmetry(all[i].clone(), all[j].clone()));
                }
            }
        }
        Ok(SortHierarchy { sorts: all, index, edges, leq, witnesses: BTreeMap::new(), synthetic: BTreeSet::new() })
    }

    /// Builds a hierarchy from a sort module given as definite clauses.
    ///
    /// Two shapes are accepted: a subsort axiom `~s1(x) | s2(x)` and a
    /// ground sort fact `s(c)`. Every sort other than `TOP` and `BOTTOM`
    /// must end up with a witness constant at or below it.
    pub fn load_sort_module(declared: &[Sort], clauses: &[Clause]) -> Result<Self, SortError> {
        let mut edges = Vec::new();
        let mut facts = Vec::new();
        for clause in clauses {
            match classify_module_clause(clause) {
                Some(ModuleClause::Subsort(a, b)) => edges.push((a, b)),
                Some(ModuleClause::Fact(s, c)) => facts.push((s, c)),
                None => return Err(SortError::UnsupportedClause(clause.to_string())),
            }
        }
        let mut sorts: Vec<Sort> = declared.to_vec();
        sorts.extend(facts.iter().map(|(s, _)| s.clone()));
        let mut h = SortHierarchy::new(sorts, edges)?;
        for (s, c) in facts {
            h.add_witness(c, &s)?;
        }
        if let Some(s) = h.unwitnessed().into_iter().next() {
            return Err(SortError::Uninhabited(s));
        }
        Ok(h)
    }

    pub fn add_witness(&mut self, constant: Symbol, sort: &Sort) -> Result<(), SortError> {
        self.idx(sort)?;
        self.witnesses.entry(sort.clone()).or_default().insert(constant);
        Ok(())
    }

    /// Sorts other than `TOP`, `BOTTOM` and synthetic sorts that have no
    /// witness constant at or below them.
    pub fn unwitnessed(&self) -> Vec<Sort> {
        self.sorts
            .iter()
            .filter(|s| !s.is_top() && !s.is_bottom() && !self.synthetic.contains(*s))
            .filter(|s| !self.witnesses.keys().any(|w| self.le(w, s)))
            .cloned()
            .collect()
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn edges(&self) -> &[(Sort, Sort)] {
        &self.edges
    }

    pub fn witnesses(&self) -> &BTreeMap<Sort, BTreeSet<Symbol>> {
        &self.witnesses
    }

    pub fn contains(&self, s: &Sort) -> bool {
        self.index.contains_key(s)
    }

    pub fn is_synthetic(&self, s: &Sort) -> bool {
        self.synthetic.contains(s)
    }

    pub fn len(&self) -> usize {
        self.sorts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn idx(&self, s: &Sort) -> Result<usize, SortError> {
        self.index.get(s).copied().ok_or_else(|| SortError::Unknown(s.clone()))
    }

    fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.sorts.len() + j]
    }

    /// `s1 ⪯ s2` in the reflexive transitive closure.
    pub fn leq(&self, s1: &Sort, s2: &Sort) -> Result<bool, SortError> {
        Ok(self.leq_idx(self.idx(s1)?, self.idx(s2)?))
    }

    /// Like [`leq`](Self::leq) but unknown sorts compare as unrelated.
    pub fn le(&self, s1: &Sort, s2: &Sort) -> bool {
        if s1 == s2 {
            return true;
        }
        match (self.index.get(s1), self.index.get(s2)) {
            (Some(&i), Some(&j)) => self.leq_idx(i, j),
            _ => false,
        }
    }

    /// All common lower bounds of `sorts`, in index order.
    pub fn lower_bounds(&self, sorts: &[Sort]) -> Result<Vec<Sort>, SortError> {
        let ids = sorts.iter().map(|s| self.idx(s)).collect::<Result<Vec<_>, _>>()?;
        Ok((0..self.sorts.len())
            .filter(|&t| ids.iter().all(|&s| self.leq_idx(t, s)))
            .map(|t| self.sorts[t].clone())
            .collect())
    }

    /// Maximal elements among the common lower bounds.
    pub fn maximal_lower_bounds(&self, sorts: &[Sort]) -> Result<Vec<Sort>, SortError> {
        let lower = self.lower_bounds(sorts)?;
        Ok(lower.iter().filter(|t| !lower.iter().any(|u| u != *t && self.le(t, u))).cloned().collect())
    }

    /// Greatest lower bound of a nonempty set of sorts.
    pub fn glb(&self, sorts: &[Sort]) -> Result<Sort, SortError> {
        if sorts.is_empty() {
            return Err(SortError::EmptyGlb);
        }
        if let [s] = sorts {
            self.idx(s)?;
            return Ok(s.clone());
        }
        let mut maximal = self.maximal_lower_bounds(sorts)?;
        if maximal.len() == 1 {
            Ok(maximal.pop().unwrap())
        } else {
            Err(SortError::NoUniqueGlb { sorts: sorts.to_vec(), maximal })
        }
    }

    /// Checks that every pair of sorts has a unique greatest lower bound.
    pub fn check_glbs(&self) -> Result<(), SortError> {
        for i in 0..self.sorts.len() {
            for j in (i + 1)..self.sorts.len() {
                self.glb(&[self.sorts[i].clone(), self.sorts[j].clone()])?;
            }
        }
        Ok(())
    }

    /// Completes the order to a meet-semilattice by adding synthetic sorts.
    ///
    /// Each sort is represented by its principal down-set; the family is
    /// closed under intersection and every intersection that is not
    /// already a principal down-set becomes a fresh sort. A synthetic sort
    /// is named after the minimal original sorts above it.
    pub fn synthesize_glbs(&self) -> SortHierarchy {
        let n = self.sorts.len();
        let down = |i: usize| -> Vec<bool> { (0..n).map(|t| self.leq_idx(t, i)).collect() };
        let principal: Vec<Vec<bool>> = (0..n).map(down).collect();
        let mut family: BTreeSet<Vec<bool>> = principal.iter().cloned().collect();
        loop {
            let members: Vec<&Vec<bool>> = family.iter().collect();
            let mut fresh = BTreeSet::new();
            for (a, x) in members.iter().enumerate() {
                for y in &members[a + 1..] {
                    let meet: Vec<bool> = x.iter().zip(y.iter()).map(|(p, q)| *p && *q).collect();
                    if !family.contains(&meet) {
                        fresh.insert(meet);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            family.extend(fresh);
        }
        let new_sets: Vec<Vec<bool>> = family.into_iter().filter(|s| !principal.contains(s)).collect();
        if new_sets.is_empty() {
            return self.clone();
        }

        let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(p, q)| !*p || *q);
        let mut named: Vec<(Sort, Vec<bool>)> = Vec::new();
        let mut taken: BTreeSet<String> = self.sorts.iter().map(|s| s.name().to_string()).collect();
        for set in &new_sets {
            let uppers: Vec<usize> = (0..n).filter(|&s| subset(set, &principal[s])).collect();
            let minimal: Vec<&str> = uppers
                .iter()
                .filter(|&&u| !uppers.iter().any(|&v| v != u && self.leq_idx(v, u)))
                .map(|&u| self.sorts[u].name())
                .collect();
            let mut parts: Vec<&str> = minimal;
            parts.sort_unstable();
            let mut name = String::from("Glb");
            for p in parts {
                name.push('_');
                name.push_str(p);
            }
            let mut candidate = name.clone();
            let mut k = 2;
            while taken.contains(&candidate) {
                candidate = alloc::format!("{name}_{k}");
                k += 1;
            }
            taken.insert(candidate.clone());
            named.push((Sort::new(&candidate), set.clone()));
        }
        named.sort_by(|a, b| a.0.cmp(&b.0));

        // Element sets for the extended order.
        let mut sets: Vec<(Sort, Vec<bool>)> = self.sorts.iter().cloned().zip(principal.iter().cloned()).collect();
        sets.extend(named.iter().cloned());
        let strictly_below = |a: &[bool], b: &[bool]| a != b && subset(a, b);

        let mut edges = self.edges.clone();
        for (g, gs) in &named {
            for (s, ss) in &sets {
                if strictly_below(gs, ss)
                    && !sets.iter().any(|(_, ms)| strictly_below(gs, ms) && strictly_below(ms, ss))
                {
                    edges.push((g.clone(), s.clone()));
                }
                if strictly_below(ss, gs)
                    && !sets.iter().any(|(_, ms)| strictly_below(ss, ms) && strictly_below(ms, gs))
                {
                    edges.push((s.clone(), g.clone()));
                }
            }
        }
        edges.sort();
        edges.dedup();
        let all: Vec<Sort> = sets.iter().map(|(s, _)| s.clone()).collect();
        let mut out = SortHierarchy::new(all, edges).expect("intersection closure is a partial order");
        out.witnesses = self.witnesses.clone();
        out.synthetic = self.synthetic.clone();
        out.synthetic.extend(named.into_iter().map(|(s, _)| s));
        out
    }
}

enum ModuleClause {
    Subsort(Sort, Sort),
    Fact(Sort, Symbol),
}

fn classify_module_clause(clause: &Clause) -> Option<ModuleClause> {
    let lits = clause.literals();
    match lits {
        [only] if only.positive && only.atom.args.len() == 1 => match &only.atom.args[0] {
            Term::App(c, args) if args.is_empty() => {
                Some(ModuleClause::Fact(Sort::new(only.atom.predicate.name()), c.clone()))
            }
            _ => None,
        },
        [a, b] => {
            let (neg, pos) = match (a.positive, b.positive) {
                (false, true) => (a, b),
                (true, false) => (b, a),
                _ => return None,
            };
            match (&neg.atom.args[..], &pos.atom.args[..]) {
                ([Term::Var(x)], [Term::Var(y)]) if x == y => Some(ModuleClause::Subsort(
                    Sort::new(neg.atom.predicate.name()),
                    Sort::new(pos.atom.predicate.name()),
                )),
                _ => None,
            }
        }
        _ => None,
    }
}
