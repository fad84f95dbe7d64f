//! Property criteria checked against brute force on random instances.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use osfol::core::network::{Agent, AgentNetwork};
use osfol::core::report::{prove_centralized, ReportConfig, SendFailure, Verdict};
use osfol::core::saturation::{saturate, subsumes, Limits, Never, ProofResult};
use osfol::core::sorts::{Sort, SortError, SortHierarchy};
use osfol::core::syntax::{Atom, Clause, Literal, Signature, Symbol, Term, Variable};
use osfol::core::transform::{
    clausify, relativize_formula, relativize_signature, unskolemize, SkolemTable, UnskolemError,
};
use osfol::core::unify::{sigma_mgu, sigma_mgu_selected, UnifyFailure};
use osfol::{parse_clause, run_report, Deadline, Schedule};

use crate::gen::{self, Rng8, Vocab};
use crate::oracle::{self, Order};

fn rng(seed: u64) -> Rng8 {
    Rng8::seed_from_u64(seed)
}

fn limits(max_clauses: usize) -> Limits {
    Limits { max_clauses, ..Limits::default() }
}

/// `Some(true)` proved, `Some(false)` saturated, `None` stopped on a limit.
fn decided(r: &ProofResult) -> Option<bool> {
    match r {
        ProofResult::Proved(_) => Some(true),
        ProofResult::Saturated => Some(false),
        ProofResult::ResourceLimit(_) => None,
    }
}

pub fn criterion_5() -> Result<String, String> {
    let mut rng = rng(5);
    // Relativized clauses accumulate long chains of sort literals, so
    // both sides share a cap on given clauses as well.
    let budget = Limits { max_iterations: Some(150), ..limits(3000) };
    let (mut compared, mut proved, mut limited, mut grounded, mut attempts) = (0, 0, 0, 0, 0);
    while compared < 200 {
        attempts += 1;
        if attempts > 5000 {
            return Err(format!("only {compared} decided comparisons in {attempts} sentences"));
        }
        let n = rng.gen_range(1..=4);
        let h = gen::hierarchy(&mut rng, n, 0.4);
        let mut sig = gen::witnessed_signature(&h);
        if gen::proper_sorts(sig.hierarchy()).len() > 5 {
            continue;
        }
        let np = rng.gen_range(1..=4);
        let preds = gen::predicates(&mut rng, &mut sig, np);
        if rng.gen_bool(0.5) {
            gen::acyclic_function(&mut rng, &mut sig, "f");
        }
        let funcs = Vocab::all_functions(&sig);
        let voc = Vocab { sig: &sig, preds: &preds, funcs: &funcs };
        let pieces = rng.gen_range(1..=4);
        let phi = gen::sentence(&mut rng, &voc, pieces, 2);

        let mut sorted_sig = sig.clone();
        let clauses = clausify(&phi, &mut sorted_sig, &mut SkolemTable::new(), None).map_err(|e| e.to_string())?;
        if gen::functions_cyclic(&sorted_sig) {
            continue;
        }
        let sorted = saturate(&clauses, &sorted_sig, &budget, &Never);

        let rel = relativize_signature(&sig).map_err(|e| e.to_string())?;
        let mut flat = rel.signature.clone();
        let mut unsorted_input = rel.axioms.clone();
        unsorted_input.extend(
            clausify(&relativize_formula(&phi), &mut flat, &mut SkolemTable::new(), None).map_err(|e| e.to_string())?,
        );
        let unsorted = saturate(&unsorted_input, &flat, &budget, &Never);

        let (Some(a), Some(b)) = (decided(&sorted.result), decided(&unsorted.result)) else {
            limited += 1;
            continue;
        };
        if a != b {
            return Err(format!("sorted {a} but relativized {b} for {phi}"));
        }
        if let Some(g) = oracle::ground_refutable(&clauses, &sorted_sig, 3, 50_000) {
            grounded += 1;
            if g != a {
                return Err(format!("saturation says {a} but ground instances say {g} for {phi}"));
            }
        }
        compared += 1;
        proved += usize::from(a);
    }
    Ok(format!(
        "{compared} sentences agree ({proved} refutable), {grounded} also confirmed on ground instances, {limited} skipped on limits"
    ))
}

struct Instance {
    net: AgentNetwork,
    query: osfol::core::syntax::Formula,
}

fn agent_name(i: usize) -> Symbol {
    Symbol::new(&format!("a{i}"))
}

fn random_instance(rng: &mut Rng8) -> Option<Instance> {
    let n = rng.gen_range(2..=6);
    let ns = rng.gen_range(1..=3);
    let h = gen::hierarchy(rng, ns, 0.4);
    let mut sig = gen::witnessed_signature(&h);
    let parent = gen::tree(rng, n);
    let npred = rng.gen_range(2..=n + 2);
    let preds = gen::predicates(rng, &mut sig, npred);
    let mut labels: Vec<BTreeSet<Symbol>> = vec![BTreeSet::new(); n];
    for p in &preds {
        for a in gen::carrier(rng, &parent) {
            labels[a].insert(p.clone());
        }
    }
    let mut private: Vec<Vec<Symbol>> = vec![Vec::new(); n];
    for (a, own) in private.iter_mut().enumerate() {
        for k in 0..rng.gen_range(0..=2) {
            let name = Symbol::new(&format!("c{a}_{k}"));
            let s = gen::proper_sort(rng, &sig);
            sig.declare_function(name.clone(), vec![], s).ok()?;
            own.push(name);
        }
        if rng.gen_bool(0.3) {
            if let Some(f) = gen::acyclic_function(rng, &mut sig, &format!("f{a}")) {
                own.push(f);
            }
        }
    }
    let witnesses: Vec<Symbol> = sig.functions().keys().filter(|f| sig.is_witness(f)).cloned().collect();
    let mut agents = Vec::new();
    for a in 0..n {
        let my_preds: Vec<Symbol> = labels[a].iter().cloned().collect();
        let mut funcs = witnesses.clone();
        funcs.extend(private[a].iter().cloned());
        let mut agent = Agent::new(agent_name(a).name());
        agent.symbols = labels[a].clone();
        agent.symbols.extend(private[a].iter().cloned());
        if !my_preds.is_empty() {
            let voc = Vocab { sig: &sig, preds: &my_preds, funcs: &funcs };
            for _ in 0..rng.gen_range(1..=4) {
                let vars: Vec<Variable> = (0..rng.gen_range(0..=2))
                    .map(|k| Variable::new(&format!("v{k}"), gen::proper_sort(rng, &sig)))
                    .collect();
                let lits: Option<Vec<Literal>> =
                    (0..rng.gen_range(1..=3)).map(|_| gen::literal(rng, &voc, &vars, 2)).collect();
                let c = Clause::new(lits?);
                if !c.is_tautology() {
                    agent.kb.push(c);
                }
            }
        }
        agents.push(agent);
    }
    let root_preds: Vec<Symbol> = labels[0].iter().cloned().collect();
    if root_preds.is_empty() {
        return None;
    }
    let mut root_funcs = witnesses;
    root_funcs.extend(private[0].iter().cloned());
    let voc = Vocab { sig: &sig, preds: &root_preds, funcs: &root_funcs };
    let query = gen::sentence(rng, &voc, 1, 2);
    let edges = (1..n).map(|a| (agent_name(a), agent_name(parent[a].unwrap()))).collect();
    let net = AgentNetwork { signature: sig, agents, edges, decider: agent_name(0) };
    net.validate_tree().certified().then_some(Instance { net, query })
}

fn verdict_of(r: &ProofResult) -> Verdict {
    match r {
        ProofResult::Proved(_) => Verdict::Proved,
        ProofResult::Saturated => Verdict::Saturated,
        ProofResult::ResourceLimit(_) => Verdict::ResourceLimit,
    }
}

pub fn criterion_6() -> Result<String, String> {
    let mut rng = rng(6);
    let config = ReportConfig { limits: limits(3000) };
    let (mut compared, mut proved, mut limited, mut unacceptable, mut runs, mut attempts) = (0, 0, 0, 0, 0, 0);
    while compared < 100 {
        attempts += 1;
        if attempts > 20_000 {
            return Err(format!("only {compared} certified trees compared"));
        }
        let Some(inst) = random_instance(&mut rng) else { continue };
        let base = run_report(&inst.net, &inst.query, config.clone(), Schedule::default(), Deadline(None))
            .map_err(|e| format!("{e} for {}", inst.query))?;
        match &base.result {
            Err(SendFailure::Unskolemize { error: UnskolemError::Unacceptable(_), .. }) => {
                unacceptable += 1;
                continue;
            }
            Err(e) => return Err(format!("send failed: {e}")),
            Ok(_) => {}
        }
        let central = prove_centralized(&inst.net, &inst.query, &config.limits, &Never).map_err(|e| e.to_string())?;
        let (d, c) = (base.verdict(), verdict_of(&central.result));
        if d == Verdict::ResourceLimit || c == Verdict::ResourceLimit {
            limited += 1;
            continue;
        }
        if d != c {
            return Err(format!("distributed {d}, centralized {c}, query {}", inst.query));
        }
        for seed in 1..=5u64 {
            let schedule = Schedule { seed: Some(seed), concurrent: seed % 2 == 1 };
            let o = run_report(&inst.net, &inst.query, config.clone(), schedule, Deadline(None))
                .map_err(|e| e.to_string())?;
            runs += 1;
            let v = o.verdict();
            if v != d && v != Verdict::ResourceLimit {
                return Err(format!("seed {seed} gives {v}, default order gives {d}"));
            }
        }
        compared += 1;
        proved += usize::from(d == Verdict::Proved);
    }
    Ok(format!(
        "{compared} trees agree ({proved} proved), {runs} permuted runs agree, {limited} skipped on limits, {unacceptable} regenerated for unacceptable derived clauses"
    ))
}

/// World for the unification suite: a completed hierarchy, `P: (TOP, TOP)`
/// and a few functions whose profiles are random.
fn unify_world(rng: &mut Rng8, max_sorts: usize, binary: bool) -> Signature {
    let n = rng.gen_range(2..=max_sorts);
    let h = gen::hierarchy(rng, n, 0.35);
    let mut sig = gen::witnessed_signature(&h);
    sig.declare_predicate("P".into(), vec![Sort::top(), Sort::top()]).unwrap();
    let a = gen::proper_sort(rng, &sig);
    let r = gen::proper_sort(rng, &sig);
    sig.declare_function("f".into(), vec![a], r).unwrap();
    if binary {
        let (a, b, r) = (gen::proper_sort(rng, &sig), gen::any_sort(rng, &sig), gen::proper_sort(rng, &sig));
        sig.declare_function("g".into(), vec![a, b], r).unwrap();
    }
    sig
}

/// Replaces a random subterm of `t` with a variable from `vars` whose
/// sort admits it or with any variable at all.
fn perturb(rng: &mut Rng8, t: &Term, vars: &[Variable]) -> Term {
    if rng.gen_bool(0.3) {
        return Term::Var(vars.choose(rng).unwrap().clone());
    }
    match t {
        Term::App(f, args) if !args.is_empty() => {
            let k = rng.gen_range(0..args.len());
            let mut args = args.clone();
            args[k] = perturb(rng, &args[k], vars);
            Term::App(f.clone(), args)
        }
        _ => t.clone(),
    }
}

fn pair(rng: &mut Rng8, sig: &Signature, vars: &[Variable]) -> (Atom, Atom) {
    let funcs = Vocab::all_functions(sig);
    let voc = Vocab { sig, preds: &[], funcs: &funcs };
    let mut t = || gen::term(rng, &voc, vars, &Sort::top(), 2, 0.4).unwrap();
    let a = Atom::new("P", vec![t(), t()]);
    let b = if rng.gen_bool(0.5) {
        Atom::new("P", a.args.iter().map(|x| perturb(rng, x, vars)).collect())
    } else {
        let mut t = || gen::term(rng, &voc, vars, &Sort::top(), 2, 0.4).unwrap();
        Atom::new("P", vec![t(), t()])
    };
    (a, b)
}

fn is_variant_atom(a: &Atom, b: &Atom) -> bool {
    oracle::variant(&Clause::new(vec![Literal::pos(a.clone())]), &Clause::new(vec![Literal::pos(b.clone())]))
}

pub fn criterion_7() -> Result<String, String> {
    let mut rng = rng(7);
    // Soundness and order independence.
    let (mut pairs, mut unified) = (0, 0);
    while pairs < 1000 {
        let sig = unify_world(&mut rng, 5, true);
        let vars: Vec<Variable> =
            ["x", "y", "z"].iter().map(|n| Variable::new(n, gen::proper_sort(&mut rng, &sig))).collect();
        for _ in 0..10 {
            let (a, b) = pair(&mut rng, &sig, &vars);
            pairs += 1;
            let det = sigma_mgu(&[a.clone(), b.clone()], &sig);
            let mut r2 = rng.clone();
            let shuffled = sigma_mgu_selected(&[a.clone(), b.clone()], &sig, &mut |n| r2.gen_range(0..n));
            rng.gen::<u64>();
            match (&det, &shuffled) {
                (Ok(s), Ok(t)) => {
                    unified += 1;
                    let (sa, sb) = (s.apply_atom(&a), s.apply_atom(&b));
                    if sa != sb {
                        return Err(format!("{s} does not unify {a} and {b}"));
                    }
                    s.validate(&sig).map_err(|e| format!("{s} for {a}, {b}: {e}"))?;
                    sig.check_atom(&sa).map_err(|e| format!("{sa}: {e}"))?;
                    if !is_variant_atom(&sa, &t.apply_atom(&a)) {
                        return Err(format!("selection order changed the result for {a}, {b}"));
                    }
                }
                (Err(_), Err(_)) => {}
                _ => return Err(format!("selection order changed success for {a}, {b}")),
            }
        }
    }

    // Most generality and failure against ground enumeration.
    let (mut general, mut small, mut ground_checked) = (0, 0, 0usize);
    while general < 200 {
        let sig = unify_world(&mut rng, 4, false);
        let order = Order::of(sig.hierarchy());
        let (universe, _) = oracle::ground_terms(&sig, &order, 2);
        let nvars = rng.gen_range(1..=3);
        let vars: Vec<Variable> =
            ["x", "y", "z"][..nvars].iter().map(|n| Variable::new(n, gen::proper_sort(&mut rng, &sig))).collect();
        let (a, b) = pair(&mut rng, &sig, &vars);
        small += 1;
        let all_vars = oracle::vars_of_terms(a.args.iter().chain(&b.args));
        let choices: Vec<Vec<Term>> = all_vars
            .iter()
            .map(|v| universe.iter().filter(|t| order.le(&sig.sort_of(t).unwrap(), &v.sort)).cloned().collect())
            .collect();
        let unifiers: Vec<BTreeMap<Variable, Term>> = oracle::product(&choices)
            .into_iter()
            .map(|ts| all_vars.iter().cloned().zip(ts).collect::<BTreeMap<_, _>>())
            .filter(|m| oracle::apply_atom(&a, m) == oracle::apply_atom(&b, m))
            .collect();
        match sigma_mgu(&[a.clone(), b.clone()], &sig) {
            Err(e) if !unifiers.is_empty() => {
                return Err(format!("{a} and {b} fail ({e}) but have ground unifiers"));
            }
            Err(_) => {}
            Ok(s) if unifiers.is_empty() => {
                return Err(format!("{a} and {b} unify by {s} but have no ground unifier"));
            }
            Ok(s) => {
                for tau in &unifiers {
                    let mut lambda = BTreeMap::new();
                    let factors = all_vars.iter().all(|v| {
                        let sv = s.apply_term(&Term::Var(v.clone()));
                        oracle::match_term(&sv, &tau[v], &mut lambda, &sig, &order)
                    });
                    if !factors {
                        return Err(format!("ground unifier {tau:?} is not an instance of {s}"));
                    }
                }
                ground_checked += unifiers.len();
                general += 1;
            }
        }
    }

    // Rule 5 on variable pairs, before and after completion.
    let mut var_pairs = 0;
    for _ in 0..300 {
        let n = rng.gen_range(2..=6);
        let h = gen::hierarchy(&mut rng, n, 0.35);
        for completed in [false, true] {
            let h = if completed { h.synthesize_glbs() } else { h.clone() };
            let mut sig = Signature::new(h);
            sig.declare_predicate("P".into(), vec![Sort::top()]).unwrap();
            let order = Order::of(sig.hierarchy());
            let sorts = gen::proper_sorts(sig.hierarchy());
            for s in &sorts {
                for t in &sorts {
                    var_pairs += 1;
                    let x = Variable::new("x", s.clone());
                    let y = Variable::new("y", t.clone());
                    let atoms =
                        [Atom::new("P", vec![Term::Var(x.clone())]), Atom::new("P", vec![Term::Var(y.clone())])];
                    let lower: Vec<Sort> =
                        order.lower_bounds(&[s.clone(), t.clone()]).into_iter().filter(|u| !u.is_bottom()).collect();
                    let greatest = order.greatest(&lower);
                    match (sigma_mgu(&atoms, &sig), lower.is_empty(), &greatest) {
                        (Err(UnifyFailure::BottomGlb(..)), true, _) => {}
                        (Err(UnifyFailure::NoUniqueGlb(..)), false, None) => {}
                        (Ok(sub), false, Some(g)) => {
                            let tx = sub.apply_term(&Term::Var(x.clone()));
                            if tx != sub.apply_term(&Term::Var(y.clone())) || sig.sort_of(&tx).unwrap() != *g {
                                return Err(format!("{x} and {y} merge to {tx}, expected sort {g}"));
                            }
                        }
                        (r, _, _) => {
                            return Err(format!("{x} and {y}: got {r:?}, lower bounds {lower:?}"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{pairs} pairs sound ({unified} unifiable, order independent); {general} of {small} small instances most general over {ground_checked} ground unifiers; {var_pairs} variable pairs match rule 5"
    ))
}

pub fn criterion_8() -> Result<String, String> {
    let mut rng = rng(8);
    let mut pairs = 0;
    for instance in 0..600 {
        let n = 1 + instance % 8;
        let p = rng.gen_range(0.1..0.7);
        let h = gen::hierarchy(&mut rng, n, p);
        let original = Order::new(h.sorts(), h.edges());
        let names: Vec<Sort> = h.sorts().to_vec();
        for a in &names {
            for b in &names {
                let lower = original.lower_bounds(&[a.clone(), b.clone()]);
                match (h.glb(&[a.clone(), b.clone()]), original.greatest(&lower)) {
                    (Ok(g), Some(e)) if g == e => {}
                    (Err(SortError::NoUniqueGlb { .. }), None) => {}
                    (r, e) => return Err(format!("before completion glb({a}, {b}) = {r:?}, brute force {e:?}")),
                }
            }
        }
        let done = h.synthesize_glbs();
        let closure = Order::of(&done);
        let all: Vec<Sort> = done.sorts().to_vec();
        for a in &all {
            for b in &all {
                if done.le(a, b) != closure.le(a, b) {
                    return Err(format!("order of {a} and {b} disagrees with the closure"));
                }
                pairs += 1;
                let lower = closure.lower_bounds(&[a.clone(), b.clone()]);
                let Some(expected) = closure.greatest(&lower) else {
                    return Err(format!("{a} and {b} still lack a greatest lower bound"));
                };
                if done.glb(&[a.clone(), b.clone()]).ok() != Some(expected.clone()) {
                    return Err(format!("glb({a}, {b}) should be {expected}"));
                }
            }
        }
        for a in &names {
            for b in &names {
                if original.le(a, b) != closure.le(a, b) {
                    return Err(format!("completion changed the order of {a} and {b}"));
                }
                let g = done.glb(&[a.clone(), b.clone()]).unwrap();
                let below_meet: BTreeSet<&Sort> = names.iter().filter(|s| closure.le(s, &g)).collect();
                let below_both: BTreeSet<&Sort> =
                    names.iter().filter(|s| original.le(s, a) && original.le(s, b)).collect();
                if below_meet != below_both {
                    return Err(format!("glb({a}, {b}) = {g} has the wrong original sorts below it"));
                }
            }
        }
    }
    Ok(format!("600 hierarchies of 1-8 sorts, {pairs} pairs after completion match brute force"))
}

fn generalize(rng: &mut Rng8, t: &Term, sig: &Signature, order: &Order, map: &mut Vec<(Term, Variable)>) -> Term {
    if map.len() < 3 && rng.gen_bool(0.4) {
        if let Some((_, v)) = map.iter().find(|(s, _)| s == t) {
            return Term::Var(v.clone());
        }
        let ts = sig.sort_of(t).unwrap();
        let above: Vec<Sort> = order.sorts().iter().filter(|s| !s.is_bottom() && order.le(&ts, s)).cloned().collect();
        let v = Variable::new(["x", "y", "z"][map.len()], above.choose(rng).unwrap().clone());
        map.push((t.clone(), v.clone()));
        return Term::Var(v);
    }
    match t {
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| generalize(rng, a, sig, order, map)).collect()),
        Term::Var(_) => t.clone(),
    }
}

pub fn criterion_9() -> Result<String, String> {
    let mut rng = rng(9);
    let (mut instances, mut positive) = (0, 0);
    while instances < 600 {
        let n = rng.gen_range(2..=4);
        let h = gen::hierarchy(&mut rng, n, 0.4);
        let mut sig = gen::witnessed_signature(&h);
        sig.declare_predicate("P".into(), vec![Sort::top()]).unwrap();
        sig.declare_predicate("Q".into(), vec![Sort::top(), Sort::top()]).unwrap();
        let (a, r) = (gen::proper_sort(&mut rng, &sig), gen::proper_sort(&mut rng, &sig));
        sig.declare_function("f".into(), vec![a], r).unwrap();
        let order = Order::of(sig.hierarchy());
        let preds = [Symbol::new("P"), Symbol::new("Q")];
        let funcs = Vocab::all_functions(&sig);
        let voc = Vocab { sig: &sig, preds: &preds, funcs: &funcs };
        let target_vars: Vec<Variable> =
            ["u", "v"].iter().map(|n| Variable::new(n, gen::proper_sort(&mut rng, &sig))).collect();
        let c2 = Clause::new(
            (0..rng.gen_range(1..=4)).filter_map(|_| gen::literal(&mut rng, &voc, &target_vars, 2)).collect(),
        );
        let c1 = if rng.gen_bool(0.5) {
            let mut map = Vec::new();
            let mut lits: Vec<Literal> = c2.literals().to_vec();
            lits.shuffle(&mut rng);
            lits.truncate(rng.gen_range(1..=lits.len().max(1)));
            Clause::new(
                lits.iter()
                    .map(|l| Literal {
                        atom: Atom {
                            predicate: l.atom.predicate.clone(),
                            args: l.atom.args.iter().map(|t| generalize(&mut rng, t, &sig, &order, &mut map)).collect(),
                        },
                        positive: l.positive,
                    })
                    .collect(),
            )
        } else {
            let pattern_vars: Vec<Variable> =
                ["x", "y", "z"].iter().map(|n| Variable::new(n, gen::any_sort(&mut rng, &sig))).collect();
            Clause::new(
                (0..rng.gen_range(1..=3)).filter_map(|_| gen::literal(&mut rng, &voc, &pattern_vars, 2)).collect(),
            )
        };
        if c1.is_empty() || c2.is_empty() || oracle::clause_vars(&c1).len() > 3 {
            continue;
        }
        instances += 1;
        let expected = oracle::subsumes(&c1, &c2, &sig, &order);
        if subsumes(&c1, &c2, &sig) != expected {
            return Err(format!("subsumes({c1}, {c2}) should be {expected}"));
        }
        positive += usize::from(expected);
        if !subsumes(&Clause::empty(), &c2, &sig) || !subsumes(&c2, &c2, &sig) || !subsumes(&c1, &c1, &sig) {
            return Err(format!("empty clause or reflexivity fails on {c1}, {c2}"));
        }
    }
    Ok(format!("{instances} instances match brute force ({positive} subsumed); empty clause and reflexivity hold"))
}

/// Fixed signature and adversaries for the round-trip suite.
fn round_trip_world() -> (Signature, Vec<Symbol>, Vec<Vec<Clause>>) {
    let mut h = SortHierarchy::new(
        ["A", "B", "C", "D"].map(Sort::new),
        [(Sort::new("B"), Sort::new("A")), (Sort::new("C"), Sort::new("A"))],
    )
    .unwrap();
    for (c, s) in [("a", "A"), ("b", "B"), ("c", "C"), ("d", "D")] {
        h.add_witness(c.into(), &Sort::new(s)).unwrap();
    }
    let mut sig = Signature::new(h);
    sig.declare_predicate("P".into(), vec!["A".into()]).unwrap();
    sig.declare_predicate("Q".into(), vec!["A".into(), "D".into()]).unwrap();
    sig.declare_predicate("R".into(), vec!["B".into()]).unwrap();
    sig.declare_predicate("T".into(), vec!["D".into()]).unwrap();
    let adversaries: Vec<Vec<Clause>> = [
        &[][..],
        &["~P(x:A) | ~T(y:D)", "T(d)"][..],
        &["~Q(x:A, y:D) | P(x:A)", "~P(b)", "~R(x:B) | T(d)"][..],
        &["P(x:A) | R(y:B)", "~T(y:D) | ~Q(c, y:D)", "Q(x:A, d) | T(y:D)"][..],
    ]
    .iter()
    .map(|cs| cs.iter().map(|t| parse_clause(t, &sig).unwrap()).collect())
    .collect();
    let preds = ["P", "Q", "R", "T"].map(Symbol::new).to_vec();
    (sig, preds, adversaries)
}

pub fn criterion_10() -> Result<String, String> {
    let mut rng = rng(10);
    let (base, preds, adversaries) = round_trip_world();
    let budget = limits(3000);
    let (mut sets, mut compared, mut refuted, mut limited, mut attempts) = (0, 0, 0, 0, 0);
    while sets < 200 {
        attempts += 1;
        if attempts > 5000 {
            return Err(format!("only {sets} clause sets in {attempts} attempts"));
        }
        let funcs = Vocab::all_functions(&base);
        let voc = Vocab { sig: &base, preds: &preds, funcs: &funcs };
        let pieces = rng.gen_range(1..=3);
        let phi = gen::sentence(&mut rng, &voc, pieces, 2);
        let mut sig = base.clone();
        let mut table = SkolemTable::new();
        let c = clausify(&phi, &mut sig, &mut table, None).map_err(|e| e.to_string())?;
        let skolems: BTreeSet<Symbol> = table.entries().keys().cloned().collect();
        if skolems.is_empty() || gen::functions_cyclic(&sig) {
            continue;
        }
        let blocks = unskolemize(&c, &skolems, &sig).map_err(|e| format!("{phi}: {e}"))?;
        let mut again = Vec::new();
        for b in &blocks {
            again.extend(clausify(&b.to_formula(), &mut sig, &mut table, None).map_err(|e| e.to_string())?);
        }
        if gen::functions_cyclic(&sig) {
            continue;
        }
        sets += 1;
        for adv in &adversaries {
            let with = |cs: &[Clause]| -> Vec<Clause> { cs.iter().chain(adv).cloned().collect() };
            let before = saturate(&with(&c), &sig, &budget, &Never);
            let after = saturate(&with(&again), &sig, &budget, &Never);
            let (Some(x), Some(y)) = (decided(&before.result), decided(&after.result)) else {
                limited += 1;
                continue;
            };
            if x != y {
                let w: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
                return Err(format!("{phi}: original {x}, round trip {y} via {}", w.join(" ; ")));
            }
            compared += 1;
            refuted += usize::from(x);
        }
    }
    Ok(format!(
        "{sets} Skolemized sets round-trip; {compared} adversary comparisons agree ({refuted} refutable), {limited} skipped on limits"
    ))
}
