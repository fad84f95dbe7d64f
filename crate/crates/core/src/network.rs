//! Agent networks, their signature labels and the signature-tree checks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::saturation::{saturate, Interrupt, Limits, ProofResult};
use crate::syntax::{Clause, Signature, Symbol, SyntaxError};

pub type AgentId = Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub id: AgentId,
    /// The signature label: predicate, function and constant names.
    pub symbols: BTreeSet<Symbol>,
    pub kb: Vec<Clause>,
}

impl Agent {
    pub fn new(id: &str) -> Self {
        Agent { id: Symbol::new(id), symbols: BTreeSet::new(), kb: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("agent `{0}` is declared twice")]
    DuplicateAgent(AgentId),
    #[error("the agent graph has a cycle through `{0}`")]
    Cycle(AgentId),
    #[error("agent `{0}` has no path to the decider")]
    Unreachable(AgentId),
    #[error("agent `{agent}`: {source}")]
    Syntax { agent: AgentId, source: SyntaxError },
    #[error("agent `{agent}` uses `{symbol}` outside its signature")]
    OutsideLanguage { agent: AgentId, symbol: Symbol },
}

/// A directed graph of agents over one shared signature; an edge `(u, v)`
/// means `u` reports to `v`.
#[derive(Debug, Clone)]
pub struct AgentNetwork {
    pub signature: Signature,
    pub agents: Vec<Agent>,
    pub edges: Vec<(AgentId, AgentId)>,
    pub decider: AgentId,
}

impl AgentNetwork {
    pub fn agent(&self, id: &AgentId) -> Option<&Agent> {
        self.agents.iter().find(|a| &a.id == id)
    }

    pub fn agent_mut(&mut self, id: &AgentId) -> Option<&mut Agent> {
        self.agents.iter_mut().find(|a| &a.id == id)
    }

    pub fn successors(&self, id: &AgentId) -> Vec<AgentId> {
        self.edges.iter().filter(|(u, _)| u == id).map(|(_, v)| v.clone()).collect()
    }

    pub fn predecessors(&self, id: &AgentId) -> Vec<AgentId> {
        self.edges.iter().filter(|(_, v)| v == id).map(|(u, _)| u.clone()).collect()
    }

    /// `id` together with every agent that reaches it.
    pub fn subtree(&self, id: &AgentId) -> BTreeSet<AgentId> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![id.clone()];
        while let Some(a) = stack.pop() {
            if seen.insert(a.clone()) {
                stack.extend(self.predecessors(&a));
            }
        }
        seen
    }

    /// `L(u) ∩ L(v)` plus the symbols every agent shares: sort predicates
    /// and witness constants.
    pub fn common_language(&self, u: &AgentId, v: &AgentId) -> BTreeSet<Symbol> {
        let mut out = self.signature.global_symbols();
        if let (Some(a), Some(b)) = (self.agent(u), self.agent(v)) {
            out.extend(a.symbols.intersection(&b.symbols).cloned());
        }
        out
    }

    /// Shared predicates other than sort predicates.
    pub fn edge_predicates(&self, u: &AgentId, v: &AgentId) -> BTreeSet<Symbol> {
        let (Some(a), Some(b)) = (self.agent(u), self.agent(v)) else { return BTreeSet::new() };
        a.symbols
            .intersection(&b.symbols)
            .filter(|s| self.signature.predicate(s).is_some() && !self.signature.is_sort_predicate(s))
            .cloned()
            .collect()
    }

    /// Union of all knowledge bases in agent order, without duplicates.
    pub fn combined_kb(&self) -> Vec<Clause> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for a in &self.agents {
            for c in &a.kb {
                if seen.insert(c.clone()) {
                    out.push(c.clone());
                }
            }
        }
        out
    }

    fn check_ids(&self) -> Result<(), NetworkError> {
        let mut ids = BTreeSet::new();
        for a in &self.agents {
            if !ids.insert(a.id.clone()) {
                return Err(NetworkError::DuplicateAgent(a.id.clone()));
            }
        }
        for (u, v) in &self.edges {
            for x in [u, v] {
                if !ids.contains(x) {
                    return Err(NetworkError::UnknownAgent(x.clone()));
                }
            }
        }
        if !ids.contains(&self.decider) {
            return Err(NetworkError::UnknownAgent(self.decider.clone()));
        }
        Ok(())
    }

    fn find_cycle(&self) -> Option<AgentId> {
        // Kahn's algorithm; whatever is left over lies on or behind a cycle.
        let mut indeg: BTreeMap<&AgentId, usize> = self.agents.iter().map(|a| (&a.id, 0)).collect();
        for (_, v) in &self.edges {
            *indeg.get_mut(v)? += 1;
        }
        let mut ready: Vec<&AgentId> = indeg.iter().filter(|(_, d)| **d == 0).map(|(a, _)| *a).collect();
        let mut done = 0;
        while let Some(a) = ready.pop() {
            done += 1;
            for (u, v) in &self.edges {
                if u == a {
                    let d = indeg.get_mut(v)?;
                    *d -= 1;
                    if *d == 0 {
                        ready.push(v);
                    }
                }
            }
        }
        if done == self.agents.len() {
            None
        } else {
            indeg.into_iter().find(|(_, d)| *d > 0).map(|(a, _)| a.clone())
        }
    }

    /// Length of the longest path from each agent to the decider.
    pub fn distance_to_decider(&self) -> Result<BTreeMap<AgentId, usize>, NetworkError> {
        self.check_ids()?;
        if let Some(a) = self.find_cycle() {
            return Err(NetworkError::Cycle(a));
        }
        let mut dist: BTreeMap<AgentId, usize> = BTreeMap::new();
        fn visit(n: &AgentNetwork, a: &AgentId, dist: &mut BTreeMap<AgentId, usize>) -> Option<usize> {
            if let Some(d) = dist.get(a) {
                return Some(*d);
            }
            if *a == n.decider {
                dist.insert(a.clone(), 0);
                return Some(0);
            }
            let best = n.successors(a).iter().filter_map(|v| visit(n, v, dist)).max()?;
            dist.insert(a.clone(), best + 1);
            Some(best + 1)
        }
        for a in &self.agents {
            if visit(self, &a.id, &mut dist).is_none() {
                return Err(NetworkError::Unreachable(a.id.clone()));
            }
        }
        Ok(dist)
    }

    /// Every clause of every agent is well sorted and uses only the agent's
    /// symbols plus the global ones.
    pub fn check_languages(&self) -> Result<(), NetworkError> {
        let global = self.signature.global_symbols();
        for a in &self.agents {
            for c in &a.kb {
                self.signature.check_clause(c).map_err(|e| NetworkError::Syntax { agent: a.id.clone(), source: e })?;
                if let Some(s) = c.symbols().into_iter().find(|s| !a.symbols.contains(s) && !global.contains(s)) {
                    return Err(NetworkError::OutsideLanguage { agent: a.id.clone(), symbol: s });
                }
            }
        }
        Ok(())
    }

    /// Non-global symbols of all labels.
    pub fn label_symbols(&self) -> BTreeSet<Symbol> {
        let global = self.signature.global_symbols();
        self.agents.iter().flat_map(|a| a.symbols.iter()).filter(|s| !global.contains(*s)).cloned().collect()
    }

    /// Saturates each knowledge base on its own within `limits`. Only a
    /// refutation is conclusive; a limit leaves the question open.
    pub fn consistency_precheck(&self, limits: &Limits, interrupt: &dyn Interrupt) -> Vec<(AgentId, Consistency)> {
        self.agents
            .iter()
            .map(|a| {
                let verdict = match saturate(&a.kb, &self.signature, limits, interrupt).result {
                    ProofResult::Proved(_) => Consistency::Inconsistent,
                    ProofResult::Saturated => Consistency::Consistent,
                    ProofResult::ResourceLimit(_) => Consistency::Unknown,
                };
                (a.id.clone(), verdict)
            })
            .collect()
    }

    /// Brute force over every nonempty symbol set Ω: the agents whose label
    /// contains Ω must have a member reachable from all of them inside that
    /// set. `None` when there are more than `max_symbols` symbols.
    pub fn exhaustive_peak_check(&self, max_symbols: usize) -> Option<Result<(), BTreeSet<Symbol>>> {
        let symbols: Vec<Symbol> = self.label_symbols().into_iter().collect();
        if symbols.len() > max_symbols || symbols.len() >= 31 {
            return None;
        }
        for mask in 1u32..(1 << symbols.len()) {
            let omega: BTreeSet<Symbol> =
                symbols.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| s.clone()).collect();
            let carrier: BTreeSet<&AgentId> =
                self.agents.iter().filter(|a| omega.is_subset(&a.symbols)).map(|a| &a.id).collect();
            if carrier.is_empty() {
                continue;
            }
            let reaches = |from: &AgentId, to: &AgentId| {
                let mut seen = BTreeSet::new();
                let mut stack = alloc::vec![from.clone()];
                while let Some(x) = stack.pop() {
                    if &x == to {
                        return true;
                    }
                    if seen.insert(x.clone()) {
                        stack.extend(self.successors(&x).into_iter().filter(|y| carrier.contains(y)));
                    }
                }
                false
            };
            let has_decider = carrier.iter().any(|d| carrier.iter().all(|a| reaches(a, d)));
            if !has_decider {
                return Some(Err(omega));
            }
        }
        Some(Ok(()))
    }

    pub fn validate_tree(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        if let Err(e) = self.check_ids() {
            r.push("agents", Err(format!("{e}")));
            return r;
        }
        r.push("agents", Ok(()));
        let cycle = self.find_cycle();
        r.push("acyclic", cycle.as_ref().map_or(Ok(()), |a| Err(format!("cycle through {a}"))));
        let mut degree = Ok(());
        for a in &self.agents {
            let n = self.successors(&a.id).len();
            if a.id == self.decider && n != 0 {
                degree = Err(format!("decider {} reports to another agent", a.id));
                break;
            }
            if a.id != self.decider && n != 1 {
                degree = Err(format!("{} has {n} outgoing edges", a.id));
                break;
            }
        }
        r.push("out-degree", degree);
        let reach = if cycle.is_some() {
            Err(String::from("not checked on a cyclic graph"))
        } else {
            self.distance_to_decider().map(|_| ()).map_err(|e| format!("{e}"))
        };
        r.push("decider", reach);
        r.push("peak", self.check_peak());
        let mut edge = Ok(());
        for (u, v) in &self.edges {
            if self.edge_predicates(u, v).is_empty() {
                edge = Err(format!("{u} and {v} share no predicate"));
                break;
            }
        }
        r.push("edge-predicates", edge);
        let uninhabited = self.signature.uninhabited_sorts();
        r.push(
            "inhabited",
            if uninhabited.is_empty() {
                Ok(())
            } else {
                let names: Vec<String> = uninhabited.iter().map(|s| format!("{s}")).collect();
                Err(format!("no ground term of sort {}", names.join(", ")))
            },
        );
        let h = self.signature.hierarchy();
        let synthetic: Vec<String> = h.sorts().iter().filter(|s| h.is_synthetic(s)).map(|s| format!("{s}")).collect();
        if !synthetic.is_empty() {
            r.notes.push(format!("synthetic sorts need no witness: {}", synthetic.join(", ")));
        }
        r.push("kb-language", self.check_languages().map_err(|e| format!("{e}")));
        r
    }

    /// For each symbol and non-decider `u` with parent `v`: if the symbol is
    /// in `L(u)` and in some label outside the subtree of `u`, it is in
    /// `L(v)`.
    fn check_peak(&self) -> Result<(), String> {
        let global = self.signature.global_symbols();
        for a in &self.agents {
            let Some(parent) = self.successors(&a.id).into_iter().next() else { continue };
            let Some(p) = self.agent(&parent) else { continue };
            let below = self.subtree(&a.id);
            for s in a.symbols.iter().filter(|s| !global.contains(*s)) {
                let outside = self.agents.iter().find(|w| !below.contains(&w.id) && w.symbols.contains(s));
                if let (Some(w), false) = (outside, p.symbols.contains(s)) {
                    return Err(format!("{s} is in {} and {} but not in {}", a.id, w.id, p.id));
                }
            }
        }
        Ok(())
    }
}

/// One named check with its outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Inconsistent,
    Unknown,
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Consistency::Consistent => "consistent",
            Consistency::Inconsistent => "inconsistent",
            Consistency::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Remarks that do not affect certification.
    pub notes: Vec<String>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, outcome: Result<(), String>) {
        self.checks.push(Check { name, outcome });
    }

    pub fn certified(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.outcome.is_ok())
    }

    pub fn get(&self, name: &str) -> Option<&Result<(), String>> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }

    /// Acyclic and every agent reaches the decider, so the report
    /// procedure can run even without certification.
    pub fn runnable(&self) -> bool {
        ["agents", "acyclic", "decider"].iter().all(|n| matches!(self.get(n), Some(Ok(()))))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.outcome {
                Ok(()) => writeln!(f, "{} = pass", c.name)?,
                Err(why) => writeln!(f, "{} = fail: {why}", c.name)?,
            }
        }
        for n in &self.notes {
            writeln!(f, "note = {n}")?;
        }
        writeln!(f, "certified = {}", if self.certified() { "yes" } else { "no" })?;
        if !self.certified() && self.runnable() {
            writeln!(f, "warning = not a signature tree; no completeness guarantee")?;
        }
        Ok(())
    }
}
