//! Exact-reproduction criteria: the three-agent steamroller and the two
//! worked un-Skolemization examples.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use osfol::core::report::{prove_centralized, PayloadItem, ReportConfig, ReportOutcome};
use osfol::core::saturation::{replay, Inference, Limits, Never, ProofResult, Trace, TraceStep};
use osfol::core::sorts::{Sort, SortHierarchy};
use osfol::core::syntax::{Clause, Formula, Quantifier, Signature, Symbol, Variable};
use osfol::core::transform::unskolemize;
use osfol::{parse_clause, parse_formula, parse_problem, run_report, Deadline, ParseOptions, Problem, Schedule};

use crate::oracle::{alpha_eq, block_matches, rename_functions, variant};

const PROBLEM: &str = include_str!("../../problems/steamroller.osfol");
const QUERY: &str = include_str!("../../problems/steamroller.q");

/// The decider's clauses after both receipts, in order. `K1` and `K2`
/// stand for whatever Skolem symbols the receiver mints.
const K_PRIME: [&str; 15] = [
    "~E(w1:W, f1:F)",
    "~E(w1:W, g1:G)",
    "E(b1:B, c1:C)",
    "~E(b1:B, s1:S)",
    "E(c1:C, K1(c1:C))",
    "P(K1(c1:C))",
    "E(s1:S, K2(s1:S))",
    "P(K2(s1:S))",
    "M(c1:C, b1:B)",
    "M(s1:S, b1:B)",
    "M(b1:B, f1:F)",
    "M(f1:F, w1:W)",
    "E(a1:A, p1:P) | ~M(a2:A, a1:A) | ~E(a2:A, p2:P) | E(a1:A, a2:A)",
    "G(j(a1:A, a2:A))",
    "~E(a1:A, a2:A) | ~E(a2:A, j(a1:A, a2:A))",
];

enum Rule {
    Resolve((usize, usize), (usize, usize)),
    Factor(usize, usize, usize),
}

/// Steps 16 to 25 with literals in the order they are written, and
/// literal references counted in that same order.
fn derivation() -> Vec<(usize, Vec<&'static str>, Rule)> {
    use Rule::*;
    vec![
        (
            16,
            vec!["E(a1:A, p1:P)", "~M(a2:A, a1:A)", "~E(a2:A, p2:P)", "~E(a2:A, j(a1:A, a2:A))"],
            Resolve((13, 4), (15, 1)),
        ),
        (17, vec!["E(a1:A, p1:P)", "~M(a2:A, a1:A)", "~E(a2:A, j(a1:A, a2:A))"], Factor(16, 3, 4)),
        (18, vec!["E(w1:W, p1:P)", "~E(f1:F, j(w1:W, f1:F))"], Resolve((17, 2), (12, 1))),
        (19, vec!["E(f1:F, p1:P)", "~E(b1:B, j(f1:F, b1:B))"], Resolve((17, 2), (11, 1))),
        (20, vec!["~E(f1:F, j(w1:W, f1:F))"], Resolve((18, 1), (2, 1))),
        (21, vec!["~E(b1:B, j(f1:F, b1:B))"], Resolve((19, 1), (20, 1))),
        (22, vec!["E(b1:B, p1:P)", "~M(s1:S, b1:B)", "~E(s1:S, p2:P)"], Resolve((13, 4), (4, 1))),
        (23, vec!["~M(s1:S, b1:B)", "~E(s1:S, p2:P)"], Resolve((21, 1), (22, 1))),
        (24, vec!["~E(s1:S, p2:P)"], Resolve((23, 1), (10, 1))),
        (25, vec![], Resolve((24, 1), (7, 1))),
    ]
}

fn load() -> Result<(Problem, Formula), String> {
    let p = parse_problem(PROBLEM, &ParseOptions::default()).map_err(|e| format!("problem: {e}"))?;
    let q = parse_formula(QUERY, &p.network.signature).map_err(|e| format!("query: {e}"))?;
    Ok((p, q))
}

fn run() -> Result<(ReportOutcome, Duration), String> {
    let start = Instant::now();
    let (p, q) = load()?;
    let outcome = run_report(&p.network, &q, ReportConfig::default(), Schedule::default(), Deadline(None))
        .map_err(|e| e.to_string())?;
    Ok((outcome, start.elapsed()))
}

/// The network signature plus `K1: C -> P` and `K2: S -> P`.
fn listing_signature(base: &Signature) -> Signature {
    let mut sig = base.clone();
    sig.declare_function("K1".into(), vec!["C".into()], "P".into()).unwrap();
    sig.declare_function("K2".into(), vec!["S".into()], "P".into()).unwrap();
    sig
}

fn k_prime(sig: &Signature) -> Vec<Clause> {
    K_PRIME.iter().map(|t| parse_clause(t, sig).unwrap_or_else(|e| panic!("{t}: {e}"))).collect()
}

/// Clause-by-clause variant check under some bijection between the
/// listing's Skolem symbols and the minted ones.
fn equal_up_to_skolems(actual: &[Clause], expected: &[Clause], minted: &[Symbol]) -> bool {
    if actual.len() != expected.len() || minted.len() != 2 {
        return false;
    }
    [[0, 1], [1, 0]].iter().any(|perm| {
        let map: BTreeMap<Symbol, Symbol> = [("K1", &minted[perm[0]]), ("K2", &minted[perm[1]])]
            .into_iter()
            .map(|(k, v)| (Symbol::new(k), v.clone()))
            .collect();
        actual.iter().zip(expected).all(|(a, e)| variant(a, &rename_functions(e, &map)))
    })
}

pub fn criterion_1() -> Result<String, String> {
    let (outcome, elapsed) = run()?;
    let Ok(ProofResult::Proved(trace)) = &outcome.result else {
        return Err(format!("verdict {}", outcome.verdict()));
    };
    replay(trace, &outcome.signature).map_err(|e| format!("own trace rejected: {e}"))?;
    let (p, _) = load()?;
    let original: BTreeSet<Symbol> = p.network.signature.functions().keys().cloned().collect();
    let minted: Vec<Symbol> = outcome
        .decider_kb
        .iter()
        .flat_map(|c| c.functions())
        .filter(|f| !original.contains(f))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let expected = k_prime(&listing_signature(&p.network.signature));
    if !equal_up_to_skolems(&outcome.decider_kb, &expected, &minted) {
        let got: Vec<String> = outcome.decider_kb.iter().map(|c| c.to_string()).collect();
        return Err(format!("decider knowledge base differs: {}", got.join(" ; ")));
    }
    if elapsed >= Duration::from_secs(5) {
        return Err(format!("took {elapsed:.2?}"));
    }
    Ok(format!(
        "proved, decider knowledge base matches all 15 clauses, {} trace steps, {elapsed:.2?} < 5 s",
        trace.len()
    ))
}

/// Finds a perfect matching between expected items and payload items.
fn payload_matches(actual: &[PayloadItem], expected: &[Expected]) -> bool {
    if actual.len() != expected.len() {
        return false;
    }
    fn fits(a: &PayloadItem, e: &Expected) -> bool {
        match (a, e) {
            (PayloadItem::Clause(c), Expected::Clause(d)) => variant(c, d),
            (PayloadItem::Formula(q), Expected::Formula(f)) => alpha_eq(&q.to_formula(), f),
            _ => false,
        }
    }
    fn assign(actual: &[PayloadItem], expected: &[Expected], used: &mut Vec<bool>, k: usize) -> bool {
        if k == expected.len() {
            return true;
        }
        for i in 0..actual.len() {
            if !used[i] && fits(&actual[i], &expected[k]) {
                used[i] = true;
                if assign(actual, expected, used, k + 1) {
                    return true;
                }
                used[i] = false;
            }
        }
        false
    }
    assign(actual, expected, &mut vec![false; actual.len()], 0)
}

enum Expected {
    Clause(Clause),
    Formula(Formula),
}

pub fn criterion_2() -> Result<String, String> {
    let (outcome, _) = run()?;
    let (p, _) = load()?;
    let sig = &p.network.signature;
    let clause = |t: &str| Expected::Clause(parse_clause(t, sig).unwrap());
    let formula = |t: &str| Expected::Formula(parse_formula(t, sig).unwrap());
    let from_y = [
        clause("~E(w1:W, f1:F)"),
        clause("~E(w1:W, g1:G)"),
        clause("E(b1:B, c1:C)"),
        clause("~E(b1:B, s1:S)"),
        formula("forall c1:C. exists p1:P. E(c1, p1)"),
        formula("forall s1:S. exists p2:P. E(s1, p2)"),
    ];
    let from_z = [clause("M(c1:C, b1:B)"), clause("M(s1:S, b1:B)"), clause("M(b1:B, f1:F)"), clause("M(f1:F, w1:W)")];
    if outcome.log.len() != 2 {
        return Err(format!("{} messages", outcome.log.len()));
    }
    for (sender, expected) in [("y", &from_y[..]), ("z", &from_z[..])] {
        let Some(m) = outcome.log.iter().find(|m| m.sender.name() == sender) else {
            return Err(format!("no message from {sender}"));
        };
        if m.receiver.name() != "x" || !payload_matches(&m.payload, expected) {
            return Err(format!("unexpected message {m}"));
        }
    }
    Ok("y sends 4 clauses and 2 quantified formulas, z sends 4 M clauses".into())
}

fn listed_trace(sig: &Signature) -> Result<Trace, String> {
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut written: BTreeMap<usize, Vec<Clause>> = BTreeMap::new();
    for (i, text) in K_PRIME.iter().enumerate() {
        let lits: Vec<Clause> =
            text.split(" | ").map(|l| parse_clause(l, sig).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        let clause = Clause::new(lits.iter().flat_map(|c| c.literals().to_vec()).collect());
        written.insert(i + 1, lits);
        steps.push(TraceStep { id: i + 1, clause, inference: Inference::Input });
    }
    let canonical = |written: &BTreeMap<usize, Vec<Clause>>, steps: &[TraceStep], id: usize, k: usize| -> usize {
        let lit = &written[&id][k - 1].literals()[0];
        let clause = &steps.iter().find(|s| s.id == id).unwrap().clause;
        clause.literals().iter().position(|l| l == lit).unwrap() + 1
    };
    for (id, lits, rule) in derivation() {
        let parsed: Vec<Clause> =
            lits.iter().map(|l| parse_clause(l, sig).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        let clause = Clause::new(parsed.iter().flat_map(|c| c.literals().to_vec()).collect());
        let inference = match rule {
            Rule::Resolve((a, i), (b, j)) => Inference::Resolve {
                left: (a, canonical(&written, &steps, a, i)),
                right: (b, canonical(&written, &steps, b, j)),
            },
            Rule::Factor(p, i, j) => Inference::Factor {
                parent: p,
                first: canonical(&written, &steps, p, i),
                second: canonical(&written, &steps, p, j),
            },
        };
        written.insert(id, parsed);
        steps.push(TraceStep { id, clause, inference });
    }
    Ok(Trace { steps })
}

pub fn criterion_3() -> Result<String, String> {
    let (p, q) = load()?;
    let sat = prove_centralized(&p.network, &q, &Limits::default(), &Never).map_err(|e| e.to_string())?;
    if !sat.result.is_proved() {
        return Err("centralized run did not prove".into());
    }
    let sig = listing_signature(&p.network.signature);
    let trace = listed_trace(&sig)?;
    replay(&trace, &sig).map_err(|e| format!("derivation rejected: {e}"))?;
    if !trace.is_refutation() || trace.len() != 25 {
        return Err("derivation does not end in the empty clause".into());
    }
    // A wrong literal reference must be caught.
    let mut broken = trace.clone();
    let step = broken.steps.iter_mut().find(|s| s.id == 18).unwrap();
    step.inference = Inference::Resolve { left: (17, 1), right: (12, 1) };
    if replay(&broken, &sig).is_ok() {
        return Err("replay accepted a corrupted step".into());
    }
    Ok("centralized run proves; the listed 25-step refutation replays; a corrupted step is rejected".into())
}

fn var(name: &str, sort: &str) -> Variable {
    Variable::new(name, Sort::new(sort))
}

pub fn criterion_4() -> Result<String, String> {
    let h = SortHierarchy::new(["s1", "s2", "s3", "s4"].map(Sort::new), []).unwrap();
    let mut sig = Signature::new(h);
    for p in ["p", "q", "r"] {
        sig.declare_predicate(p.into(), ["s1", "s2", "s3", "s4"].map(Sort::new).to_vec()).unwrap();
    }
    sig.declare_predicate("D".into(), ["s1", "s2", "s3"].map(Sort::new).to_vec()).unwrap();
    sig.declare_function("f1".into(), vec!["s1".into()], "s3".into()).unwrap();
    sig.declare_function("f2".into(), vec!["s1".into()], "s3".into()).unwrap();
    sig.declare_function("g1".into(), vec!["s2".into(), "s1".into()], "s4".into()).unwrap();
    sig.declare_function("g2".into(), vec!["s1".into(), "s2".into()], "s4".into()).unwrap();
    sig.declare_function("f".into(), vec![], "s1".into()).unwrap();
    sig.declare_function("g".into(), vec!["s1".into()], "s2".into()).unwrap();
    sig.declare_function("h".into(), vec!["s1".into(), "s2".into()], "s3".into()).unwrap();
    let clauses = |ts: &[&str]| -> Vec<Clause> { ts.iter().map(|t| parse_clause(t, &sig).unwrap()).collect() };
    let symbols = |ss: &[&str]| -> BTreeSet<Symbol> { ss.iter().map(|s| Symbol::new(s)).collect() };

    let pqr = clauses(&[
        "p(x1:s1, x2:s2, f1(x1:s1), g1(x2:s2, x1:s1))",
        "q(y1:s1, y2:s2, f2(y1:s1), g1(y2:s2, y1:s1))",
        "r(z1:s1, z2:s2, f2(z1:s1), g2(z1:s1, z2:s2))",
    ]);
    let blocks = unskolemize(&pqr, &symbols(&["f1", "f2", "g1", "g2"]), &sig).map_err(|e| e.to_string())?;
    use Quantifier::{Exists, Forall};
    let prefix = vec![
        (Forall, var("x1", "s1")),
        (Exists, var("v1", "s3")),
        (Exists, var("v2", "s3")),
        (Forall, var("x2", "s2")),
        (Exists, var("v3", "s4")),
        (Exists, var("v4", "s4")),
    ];
    let w =
        clauses(&["p(x1:s1, x2:s2, v1:s3, v3:s4)", "q(x1:s1, x2:s2, v2:s3, v3:s4)", "r(x1:s1, x2:s2, v2:s3, v4:s4)"]);
    match blocks.as_slice() {
        [b] if block_matches(&b.prefix, &b.clauses, &prefix, &w) => {}
        _ => {
            let got: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
            return Err(format!("p/q/r gave {}", got.join(" ; ")));
        }
    }

    let d = clauses(&["D(f, g(x:s1), h(x:s1, y:s2))", "s1(f)", "s2(g(x:s1))", "s3(h(x:s1, y:s2))"]);
    let blocks = unskolemize(&d, &symbols(&["f", "g", "h"]), &sig).map_err(|e| e.to_string())?;
    let expected =
        parse_formula("exists v1:s1. forall x:s1. exists v2:s2. forall y:s2. exists v3:s3. D(v1, v2, v3)", &sig)
            .map_err(|e| e.to_string())?;
    match blocks.as_slice() {
        [b] if alpha_eq(&b.to_formula(), &expected) => {}
        _ => {
            let got: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
            return Err(format!("D example gave {}", got.join(" ; ")));
        }
    }
    Ok("p/q/r yields the expected prefix and clauses; D(f, g, h) yields the five-quantifier prefix".into())
}
