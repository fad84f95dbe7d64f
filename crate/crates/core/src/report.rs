//! Language-restricted reporting between agents: sending with
//! un-Skolemization, receiving with re-Skolemization, and the
//! tree-ordered report procedure.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::network::{AgentId, AgentNetwork, NetworkError};
use crate::saturation::{saturate_from, Inference, Interrupt, LimitKind, Limits, ProofResult, Saturation};
use crate::syntax::{Clause, Formula, Signature, Symbol, SyntaxError};
use crate::transform::{clausify, unskolemize, QuantifiedClauses, SkolemTable, UnskolemError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PayloadItem {
    Clause(Clause),
    Formula(QuantifiedClauses),
}

impl PayloadItem {
    pub fn to_formula(&self) -> Formula {
        match self {
            PayloadItem::Clause(c) => Formula::closure_of(c),
            PayloadItem::Formula(q) => q.to_formula(),
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        match self {
            PayloadItem::Clause(c) => c.symbols(),
            PayloadItem::Formula(q) => q.to_formula().symbols(),
        }
    }
}

impl fmt::Display for PayloadItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PayloadItem::Clause(c) => write!(f, "{c}"),
            PayloadItem::Formula(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub sender: AgentId,
    pub receiver: AgentId,
    pub payload: Vec<PayloadItem>,
}

/// `sender -> receiver (n): item ; item ; ...`
impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} ({}):", self.sender, self.receiver, self.payload.len())?;
        for (i, p) in self.payload.iter().enumerate() {
            write!(f, "{} {p}", if i == 0 { "" } else { " ;" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SendFailure {
    #[error("{sender} -> {receiver} is not an edge")]
    NotAnEdge { sender: AgentId, receiver: AgentId },
    #[error("{sender} -> {receiver}: {error}")]
    Unskolemize { sender: AgentId, receiver: AgentId, error: UnskolemError },
    #[error("{sender} -> {receiver}: `{item}` uses {symbol} outside the common language")]
    Language { sender: AgentId, receiver: AgentId, item: alloc::string::String, symbol: Symbol },
}

/// Builds the message from `u` to `v` out of `k`. `language` gives the
/// current (session) label of each agent; sort predicates and witnesses
/// are always shared.
pub fn osfol_send(
    net: &AgentNetwork,
    sig: &Signature,
    language: &BTreeMap<AgentId, BTreeSet<Symbol>>,
    u: &AgentId,
    v: &AgentId,
    k: &[Clause],
) -> Result<Message, SendFailure> {
    if !net.edges.iter().any(|(a, b)| a == u && b == v) {
        return Err(SendFailure::NotAnEdge { sender: u.clone(), receiver: v.clone() });
    }
    let empty = BTreeSet::new();
    let (lu, lv) = (language.get(u).unwrap_or(&empty), language.get(v).unwrap_or(&empty));
    let mut common = sig.global_symbols();
    common.extend(lu.intersection(lv).cloned());
    let mut plain = Vec::new();
    let mut rest = Vec::new();
    let mut skolems = BTreeSet::new();
    for c in k {
        if c.is_empty() {
            plain.push(c.clone());
            continue;
        }
        if !c.predicates().is_subset(&common) {
            continue;
        }
        let x: BTreeSet<Symbol> = c.functions().difference(&common).cloned().collect();
        if x.is_empty() {
            plain.push(c.clone());
        } else {
            skolems.extend(x);
            rest.push(c.clone());
        }
    }
    let mut payload: Vec<PayloadItem> = plain.into_iter().map(PayloadItem::Clause).collect();
    if !rest.is_empty() {
        let qs = unskolemize(&rest, &skolems, sig).map_err(|error| SendFailure::Unskolemize {
            sender: u.clone(),
            receiver: v.clone(),
            error,
        })?;
        payload.extend(qs.into_iter().map(PayloadItem::Formula));
    }
    for item in &payload {
        if let Some(s) = item.symbols().into_iter().find(|s| !common.contains(s)) {
            return Err(SendFailure::Language {
                sender: u.clone(),
                receiver: v.clone(),
                item: alloc::format!("{item}"),
                symbol: s,
            });
        }
    }
    Ok(Message { sender: u.clone(), receiver: v.clone(), payload })
}

/// Turns a message into clauses for the receiver. Existentials become
/// Skolem symbols minted for the receiver and added to `label`.
pub fn osfol_recv(
    m: &Message,
    sig: &mut Signature,
    table: &mut SkolemTable,
    label: &mut BTreeSet<Symbol>,
) -> Result<Vec<Clause>, SyntaxError> {
    let mut out = Vec::new();
    for item in &m.payload {
        match item {
            PayloadItem::Clause(c) => out.push(c.clone()),
            PayloadItem::Formula(q) => {
                let before: BTreeSet<Symbol> = table.entries().keys().cloned().collect();
                out.extend(clausify(&q.to_formula(), sig, table, Some(&m.receiver))?);
                label.extend(table.entries().keys().filter(|s| !before.contains(*s)).cloned());
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReportConfig {
    pub limits: Limits,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("the query is not closed")]
    OpenQuery,
    #[error("the query uses `{0}`, which is not in the decider's language")]
    QueryLanguage(Symbol),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Saturated,
    ResourceLimit,
    SendFailure,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "proved",
            Verdict::Saturated => "saturated",
            Verdict::ResourceLimit => "resource limit",
            Verdict::SendFailure => "send failure",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ReportOutcome {
    /// The decider's result, or the send that failed.
    pub result: Result<ProofResult, SendFailure>,
    pub log: Vec<Message>,
    /// The decider's knowledge base after all receipts, in saturation input order.
    pub decider_kb: Vec<Clause>,
    /// Non-decider agents whose saturation stopped on a limit.
    pub interior_limits: Vec<(AgentId, LimitKind)>,
    /// The session signature, including every minted Skolem symbol.
    pub signature: Signature,
}

impl ReportOutcome {
    /// A `Saturated` decider only certifies non-provability when every
    /// other agent saturated fully.
    pub fn verdict(&self) -> Verdict {
        match &self.result {
            Err(_) => Verdict::SendFailure,
            Ok(ProofResult::Proved(_)) => Verdict::Proved,
            Ok(ProofResult::ResourceLimit(_)) => Verdict::ResourceLimit,
            Ok(ProofResult::Saturated) if !self.interior_limits.is_empty() => Verdict::ResourceLimit,
            Ok(ProofResult::Saturated) => Verdict::Saturated,
        }
    }
}

/// What one non-decider agent produced: its saturation and its outgoing
/// messages.
#[derive(Debug, Clone)]
pub struct AgentRun {
    pub agent: AgentId,
    pub saturation: Saturation,
    pub messages: Result<Vec<Message>, SendFailure>,
}

/// State of one report session. Working sets live here, never in the
/// network, and are dropped with the session.
pub struct ReportSession<'n> {
    net: &'n AgentNetwork,
    config: ReportConfig,
    sig: Signature,
    table: SkolemTable,
    language: BTreeMap<AgentId, BTreeSet<Symbol>>,
    received: BTreeMap<AgentId, Vec<(Clause, Inference)>>,
    query: Vec<Clause>,
    distance: BTreeMap<AgentId, usize>,
    log: Vec<Message>,
    interior_limits: Vec<(AgentId, LimitKind)>,
}

impl<'n> ReportSession<'n> {
    /// Checks the query and clausifies its negation at the decider.
    pub fn new(net: &'n AgentNetwork, q: &Formula, config: ReportConfig) -> Result<Self, ReportError> {
        let distance = net.distance_to_decider()?;
        net.check_languages()?;
        if !q.is_closed() {
            return Err(ReportError::OpenQuery);
        }
        net.signature.check_formula(q)?;
        let mut language: BTreeMap<AgentId, BTreeSet<Symbol>> =
            net.agents.iter().map(|a| (a.id.clone(), a.symbols.clone())).collect();
        let global = net.signature.global_symbols();
        let dl = language.entry(net.decider.clone()).or_default();
        if let Some(s) = q.symbols().into_iter().find(|s| !dl.contains(s) && !global.contains(s)) {
            return Err(ReportError::QueryLanguage(s));
        }
        let mut sig = net.signature.clone();
        let mut table = SkolemTable::new();
        let before: BTreeSet<Symbol> = table.entries().keys().cloned().collect();
        let query = clausify(&Formula::negation(q.clone()), &mut sig, &mut table, Some(&net.decider))?;
        dl.extend(table.entries().keys().filter(|s| !before.contains(*s)).cloned());
        Ok(ReportSession {
            net,
            config,
            sig,
            table,
            language,
            received: BTreeMap::new(),
            query,
            distance,
            log: Vec::new(),
            interior_limits: Vec::new(),
        })
    }

    /// Non-decider agents grouped by distance, farthest first, each group
    /// in id order.
    pub fn schedule(&self) -> Vec<Vec<AgentId>> {
        let max = self.distance.values().copied().max().unwrap_or(0);
        (1..=max)
            .rev()
            .map(|d| self.distance.iter().filter(|(_, &k)| k == d).map(|(a, _)| a.clone()).collect())
            .collect()
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn limits(&self) -> &Limits {
        &self.config.limits
    }

    /// The working set of `a`: received clauses in delivery order, then
    /// its own knowledge base, then the negated query at the decider.
    pub fn working_set(&self, a: &AgentId) -> Vec<(Clause, Inference)> {
        let mut out: Vec<(Clause, Inference)> = self.received.get(a).cloned().unwrap_or_default();
        if let Some(agent) = self.net.agent(a) {
            out.extend(agent.kb.iter().map(|c| (c.clone(), Inference::Input)));
        }
        if *a == self.net.decider {
            out.extend(self.query.iter().map(|c| (c.clone(), Inference::Input)));
        }
        out
    }

    /// Saturates the working set of `a` and prepares its messages. Needs only shared
    /// access, so agents at the same distance can run in parallel once
    /// their predecessors have been delivered.
    pub fn process_agent(&self, a: &AgentId, interrupt: &dyn Interrupt) -> AgentRun {
        let saturation = saturate_from(self.working_set(a), &self.sig, &self.config.limits, interrupt);
        let messages = self
            .net
            .successors(a)
            .iter()
            .map(|v| osfol_send(self.net, &self.sig, &self.language, a, v, &saturation.clauses))
            .collect();
        AgentRun { agent: a.clone(), saturation, messages }
    }

    /// Applies a run: records limits and delivers its messages.
    pub fn deliver(&mut self, run: AgentRun) -> Result<(), SendFailure> {
        if let ProofResult::ResourceLimit(k) = run.saturation.result {
            self.interior_limits.push((run.agent.clone(), k));
        }
        for m in run.messages? {
            let label = self.language.entry(m.receiver.clone()).or_default();
            let clauses = osfol_recv(&m, &mut self.sig, &mut self.table, label)
                .expect("payload formulas are well sorted in the session signature");
            let slot = self.received.entry(m.receiver.clone()).or_default();
            slot.extend(clauses.into_iter().map(|c| (c, Inference::Received(m.sender.clone()))));
            self.log.push(m);
        }
        Ok(())
    }

    /// Saturates at the decider.
    pub fn finish(self, interrupt: &dyn Interrupt) -> ReportOutcome {
        let decider_kb: Vec<Clause> = self.working_set(&self.net.decider).into_iter().map(|(c, _)| c).collect();
        let run = saturate_from(self.working_set(&self.net.decider), &self.sig, &self.config.limits, interrupt);
        ReportOutcome {
            result: Ok(run.result),
            log: self.log,
            decider_kb,
            interior_limits: self.interior_limits,
            signature: self.sig,
        }
    }

    /// Ends the session on a failed send.
    pub fn fail(self, e: SendFailure) -> ReportOutcome {
        ReportOutcome {
            result: Err(e),
            log: self.log,
            decider_kb: Vec::new(),
            interior_limits: self.interior_limits,
            signature: self.sig,
        }
    }
}

/// Sequential reference scheduler: decreasing distance, id order.
pub fn osfol_report(
    net: &AgentNetwork,
    q: &Formula,
    config: ReportConfig,
    interrupt: &dyn Interrupt,
) -> Result<ReportOutcome, ReportError> {
    let mut session = ReportSession::new(net, q, config)?;
    for level in session.schedule() {
        for a in level {
            let run = session.process_agent(&a, interrupt);
            if let Err(e) = session.deliver(run) {
                return Ok(session.fail(e));
            }
        }
    }
    Ok(session.finish(interrupt))
}

/// Saturates the combined knowledge base with the negated query at a
/// single agent.
pub fn prove_centralized(
    net: &AgentNetwork,
    q: &Formula,
    limits: &Limits,
    interrupt: &dyn Interrupt,
) -> Result<Saturation, ReportError> {
    if !q.is_closed() {
        return Err(ReportError::OpenQuery);
    }
    net.signature.check_formula(q)?;
    let mut sig = net.signature.clone();
    let mut table = SkolemTable::new();
    let neg = clausify(&Formula::negation(q.clone()), &mut sig, &mut table, None)?;
    let mut input = net.combined_kb();
    input.extend(neg);
    Ok(saturate_from(input.into_iter().map(|c| (c, Inference::Input)), &sig, limits, interrupt))
}

/// After a proof, adds the clauses of `q` to the decider's knowledge base.
/// Skolem symbols of `q` are declared in the network signature and the
/// decider's label.
pub fn commit_query(net: &mut AgentNetwork, q: &Formula) -> Result<(), SyntaxError> {
    let mut table = SkolemTable::new();
    let decider = net.decider.clone();
    let clauses = clausify(q, &mut net.signature, &mut table, Some(&decider))?;
    let minted: Vec<Symbol> = table.entries().keys().cloned().collect();
    if let Some(d) = net.agent_mut(&decider) {
        d.symbols.extend(minted);
        for c in clauses {
            if !d.kb.contains(&c) {
                d.kb.push(c);
            }
        }
    }
    Ok(())
}
