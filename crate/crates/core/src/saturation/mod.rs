//! Given-clause saturation with sorted resolution, factoring,
//! subsumption and the sort-literal rules.

mod inference;
mod subsume;
mod trace;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

pub use inference::{
    factor, factors, is_valid_sort_atom, resolvent, resolvents, simplify, sort_instance, sort_instances,
};
pub use subsume::{is_variant, subsumes, subsumes_no_longer};
pub use trace::{replay, Inference, ReplayError, Trace, TraceStep};

use crate::syntax::{Clause, Signature};

/// Polled once per given clause; returning true stops the run.
pub trait Interrupt {
    fn interrupted(&self) -> bool;
}

/// An interrupt that never fires.
pub struct Never;

impl Interrupt for Never {
    fn interrupted(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Interrupt for F {
    fn interrupted(&self) -> bool {
        self()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Bound on retained clauses.
    pub max_clauses: usize,
    /// Bound on given-clause iterations.
    pub max_iterations: Option<usize>,
    /// Picks by age, then by weight, in this ratio.
    pub age_weight: (u32, u32),
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_clauses: 100_000, max_iterations: None, age_weight: (1, 4) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Clauses,
    Iterations,
    Interrupted,
}

impl core::fmt::Display for LimitKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            LimitKind::Clauses => "clause limit",
            LimitKind::Iterations => "iteration limit",
            LimitKind::Interrupted => "interrupted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofResult {
    /// The empty clause was derived; the trace holds its ancestors.
    Proved(Trace),
    /// Every inference was tried without deriving the empty clause.
    Saturated,
    ResourceLimit(LimitKind),
}

impl ProofResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProofResult::Proved(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub iterations: usize,
    pub generated: usize,
    pub retained: usize,
}

#[derive(Debug, Clone)]
pub struct Saturation {
    pub result: ProofResult,
    /// Clauses alive at the end of the run in derivation order; includes
    /// the empty clause after a proof.
    pub clauses: Vec<Clause>,
    pub stats: Stats,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Passive,
    Active,
    Deleted,
}

struct Entry {
    clause: Clause,
    inference: Inference,
    state: State,
    mask: u64,
}

fn mask_of(c: &Clause) -> u64 {
    let mut m = 0u64;
    for l in c.literals() {
        let mut h: u64 = if l.positive { 0xcbf2_9ce4_8422_2325 } else { 0x8422_2325_cbf2_9ce4 };
        for b in l.atom.predicate.name().bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        m |= 1 << (h % 64);
    }
    m
}

struct Engine<'a> {
    sig: &'a Signature,
    entries: Vec<Entry>,
    by_age: BTreeSet<usize>,
    by_weight: BTreeSet<((usize, usize), usize)>,
    active: Vec<usize>,
    retained: usize,
    stats: Stats,
}

impl<'a> Engine<'a> {
    fn id(index: usize) -> usize {
        index + 1
    }

    fn push(&mut self, clause: Clause, inference: Inference, state: State) -> usize {
        let mask = mask_of(&clause);
        self.entries.push(Entry { clause, inference, state, mask });
        self.entries.len() - 1
    }

    fn forward_subsumed(&self, c: &Clause, mask: u64) -> bool {
        self.entries
            .iter()
            .any(|e| e.state != State::Deleted && e.mask & !mask == 0 && subsumes_no_longer(&e.clause, c, self.sig))
    }

    fn backward_subsume(&mut self, new: usize) {
        let (c, mask) = (self.entries[new].clause.clone(), self.entries[new].mask);
        for k in 0..self.entries.len() {
            let e = &self.entries[k];
            if k == new || e.state == State::Deleted || mask & !e.mask != 0 {
                continue;
            }
            if subsumes_no_longer(&c, &e.clause, self.sig) {
                self.delete(k);
            }
        }
    }

    fn delete(&mut self, k: usize) {
        let e = &mut self.entries[k];
        if e.state == State::Passive {
            self.by_age.remove(&k);
            self.by_weight.remove(&(e.clause.weight(), k));
        }
        if e.state == State::Active {
            self.active.retain(|&a| a != k);
        }
        e.state = State::Deleted;
        self.retained -= 1;
    }

    /// Simplifies, checks redundancy and queues a clause. Returns the
    /// index of the empty clause if one was kept.
    fn admit(&mut self, raw: Clause, inference: Inference) -> Option<usize> {
        self.stats.generated += 1;
        let c = simplify(&raw, self.sig)?.tidy();
        let mask = mask_of(&c);
        if !c.is_empty() && self.forward_subsumed(&c, mask) {
            return None;
        }
        let k = self.push(c, inference, State::Passive);
        self.retained += 1;
        self.backward_subsume(k);
        let e = &self.entries[k];
        if e.clause.is_empty() {
            return Some(k);
        }
        self.by_age.insert(k);
        self.by_weight.insert((e.clause.weight(), k));
        None
    }

    /// Inputs keep their identity; a simplified input is recorded as a
    /// separate step.
    fn admit_input(&mut self, c: Clause, inference: Inference) -> Option<usize> {
        match simplify(&c, self.sig) {
            Some(s) if s == c => {
                let mask = mask_of(&c);
                if !c.is_empty() && self.forward_subsumed(&c, mask) {
                    self.push(c, inference, State::Deleted);
                    return None;
                }
                let k = self.push(c, inference, State::Passive);
                self.retained += 1;
                self.backward_subsume(k);
                let e = &self.entries[k];
                if e.clause.is_empty() {
                    return Some(k);
                }
                self.by_age.insert(k);
                self.by_weight.insert((e.clause.weight(), k));
                None
            }
            other => {
                let k = self.push(c, inference, State::Deleted);
                let s = other?;
                self.admit(s, Inference::SortSimp { parent: Self::id(k) })
            }
        }
    }

    fn pick(&mut self, turn: u32, limits: &Limits) -> Option<usize> {
        let (age, weight) = limits.age_weight;
        let by_age = weight == 0 || turn % (age + weight).max(1) < age;
        let k = if by_age { *self.by_age.iter().next()? } else { self.by_weight.iter().next()?.1 };
        let e = &mut self.entries[k];
        self.by_age.remove(&k);
        self.by_weight.remove(&(e.clause.weight(), k));
        e.state = State::Active;
        self.active.push(k);
        Some(k)
    }

    fn proof(&self, empty: usize) -> Trace {
        let mut needed = BTreeSet::new();
        let mut stack = alloc::vec![empty];
        while let Some(k) = stack.pop() {
            if needed.insert(k) {
                stack.extend(self.entries[k].inference.parents().into_iter().map(|id| id - 1));
            }
        }
        Trace {
            steps: needed
                .into_iter()
                .map(|k| TraceStep {
                    id: Self::id(k),
                    clause: self.entries[k].clause.clone(),
                    inference: self.entries[k].inference.clone(),
                })
                .collect(),
        }
    }

    fn finish(self, result: ProofResult) -> Saturation {
        let clauses = self.entries.into_iter().filter(|e| e.state != State::Deleted).map(|e| e.clause).collect();
        let mut stats = self.stats;
        stats.retained = self.retained;
        Saturation { result, clauses, stats }
    }
}

/// Saturates input clauses, each tagged as `input`.
pub fn saturate(input: &[Clause], sig: &Signature, limits: &Limits, interrupt: &dyn Interrupt) -> Saturation {
    saturate_from(input.iter().map(|c| (c.clone(), Inference::Input)), sig, limits, interrupt)
}

/// Saturates clauses with explicit provenance (`Input` or `Received`).
/// Ids in the trace follow the order of `input`, starting at 1.
pub fn saturate_from(
    input: impl IntoIterator<Item = (Clause, Inference)>,
    sig: &Signature,
    limits: &Limits,
    interrupt: &dyn Interrupt,
) -> Saturation {
    let mut eng = Engine {
        sig,
        entries: Vec::new(),
        by_age: BTreeSet::new(),
        by_weight: BTreeSet::new(),
        active: Vec::new(),
        retained: 0,
        stats: Stats::default(),
    };
    for (c, inf) in input {
        if let Some(k) = eng.admit_input(c, inf) {
            let t = eng.proof(k);
            return eng.finish(ProofResult::Proved(t));
        }
    }
    let mut turn = 0u32;
    loop {
        if eng.retained > limits.max_clauses {
            return eng.finish(ProofResult::ResourceLimit(LimitKind::Clauses));
        }
        if limits.max_iterations.is_some_and(|m| eng.stats.iterations >= m) {
            return eng.finish(ProofResult::ResourceLimit(LimitKind::Iterations));
        }
        if interrupt.interrupted() {
            return eng.finish(ProofResult::ResourceLimit(LimitKind::Interrupted));
        }
        let Some(g) = eng.pick(turn, limits) else {
            return eng.finish(ProofResult::Saturated);
        };
        turn = turn.wrapping_add(1);
        eng.stats.iterations += 1;
        let given = eng.entries[g].clause.clone();
        let gid = Engine::id(g);
        let mut new: Vec<(Clause, Inference)> = Vec::new();
        for (i, j, c) in factors(&given, sig) {
            new.push((c, Inference::Factor { parent: gid, first: i + 1, second: j + 1 }));
        }
        for (i, c) in sort_instances(&given, sig) {
            new.push((c, Inference::SortInst { parent: gid, literal: i + 1 }));
        }
        for &a in &eng.active {
            let other = &eng.entries[a].clause;
            for (i, j, c) in resolvents(&given, other, sig) {
                new.push((c, Inference::Resolve { left: (gid, i + 1), right: (Engine::id(a), j + 1) }));
            }
        }
        for (c, inf) in new {
            if let Some(k) = eng.admit(c, inf) {
                let t = eng.proof(k);
                return eng.finish(ProofResult::Proved(t));
            }
            if eng.retained > limits.max_clauses {
                return eng.finish(ProofResult::ResourceLimit(LimitKind::Clauses));
            }
        }
    }
}
