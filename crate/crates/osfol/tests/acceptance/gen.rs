//! Random hierarchies, terms, sentences and agent trees.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use osfol::core::sorts::{Sort, SortHierarchy};
use osfol::core::syntax::{Atom, Formula, Literal, Quantifier, Signature, Symbol, Term, Variable};

pub type Rng8 = ChaCha8Rng;

/// `n` sorts `S0..` with random edges from later to earlier sorts.
pub fn hierarchy(rng: &mut Rng8, n: usize, p_edge: f64) -> SortHierarchy {
    let sorts: Vec<Sort> = (0..n).map(|i| Sort::new(&format!("S{i}"))).collect();
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(p_edge) {
                edges.push((sorts[j].clone(), sorts[i].clone()));
            }
        }
    }
    SortHierarchy::new(sorts, edges).expect("edges point downward")
}

pub fn proper_sorts(h: &SortHierarchy) -> Vec<Sort> {
    h.sorts().iter().filter(|s| !s.is_top() && !s.is_bottom()).cloned().collect()
}

/// Completes `h` to a meet-semilattice and gives every proper sort,
/// synthetic or not, its own witness constant `w0, w1, ...`.
pub fn witnessed_signature(h: &SortHierarchy) -> Signature {
    let mut h = h.synthesize_glbs();
    for (k, s) in proper_sorts(&h).iter().enumerate() {
        h.add_witness(Symbol::new(&format!("w{k}")), s).unwrap();
    }
    Signature::new(h)
}

/// Any sort, `TOP` included, picked uniformly.
pub fn any_sort(rng: &mut Rng8, sig: &Signature) -> Sort {
    let mut all = proper_sorts(sig.hierarchy());
    all.push(Sort::top());
    all.choose(rng).unwrap().clone()
}

pub fn proper_sort(rng: &mut Rng8, sig: &Signature) -> Sort {
    proper_sorts(sig.hierarchy()).choose(rng).unwrap().clone()
}

/// Vocabulary for random terms and atoms.
pub struct Vocab<'a> {
    pub sig: &'a Signature,
    pub preds: &'a [Symbol],
    pub funcs: &'a [Symbol],
}

impl Vocab<'_> {
    pub fn all_functions(sig: &Signature) -> Vec<Symbol> {
        sig.functions().keys().cloned().collect()
    }
}

/// A random well-sorted term below `bound` of depth at most `depth`.
/// Variables come from `vars`; `None` when nothing fits.
pub fn term(rng: &mut Rng8, voc: &Vocab, vars: &[Variable], bound: &Sort, depth: usize, p_var: f64) -> Option<Term> {
    let sig = voc.sig;
    let h = sig.hierarchy();
    let fitting_vars: Vec<&Variable> = vars.iter().filter(|v| h.le(&v.sort, bound)).collect();
    if !fitting_vars.is_empty() && rng.gen_bool(p_var) {
        return Some(Term::Var((*fitting_vars.choose(rng).unwrap()).clone()));
    }
    let mut funcs: Vec<(&Symbol, &osfol::core::syntax::FunctionDecl)> = sig
        .functions()
        .iter()
        .filter(|(f, d)| voc.funcs.contains(f) && h.le(&d.result, bound) && (d.args.is_empty() || depth > 1))
        .collect();
    funcs.shuffle(rng);
    // Prefer non-constants half the time so that depth is actually used.
    if rng.gen_bool(0.5) {
        funcs.sort_by_key(|(_, d)| d.args.is_empty());
    }
    for (f, d) in funcs {
        let args: Option<Vec<Term>> = d.args.iter().map(|a| term(rng, voc, vars, a, depth - 1, 0.7)).collect();
        if let Some(args) = args {
            return Some(Term::App(f.clone(), args));
        }
    }
    fitting_vars.choose(rng).map(|v| Term::Var((*v).clone()))
}

/// A random atom over a non-sort predicate.
pub fn atom(rng: &mut Rng8, voc: &Vocab, vars: &[Variable], depth: usize) -> Option<Atom> {
    let p = voc.preds.choose(rng)?;
    let args: Option<Vec<Term>> =
        voc.sig.predicate(p)?.to_vec().iter().map(|s| term(rng, voc, vars, s, depth, 0.6)).collect();
    Some(Atom { predicate: p.clone(), args: args? })
}

pub fn literal(rng: &mut Rng8, voc: &Vocab, vars: &[Variable], depth: usize) -> Option<Literal> {
    let a = atom(rng, voc, vars, depth)?;
    Some(if rng.gen_bool(0.5) { Literal::pos(a) } else { Literal::neg(a) })
}

/// A random closed formula: a conjunction of quantified pieces whose
/// matrices are small and/or trees of literals.
pub fn sentence(rng: &mut Rng8, voc: &Vocab, pieces: usize, depth: usize) -> Formula {
    let mut parts = Vec::new();
    let mut counter = 0usize;
    for _ in 0..pieces {
        let mut prefix = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            counter += 1;
            let q = if rng.gen_bool(0.65) { Quantifier::Forall } else { Quantifier::Exists };
            prefix.push((q, Variable::new(&format!("x{counter}"), proper_sort(rng, voc.sig))));
        }
        let vars: Vec<Variable> = prefix.iter().map(|(_, v)| v.clone()).collect();
        let matrix = matrix(rng, voc, &vars, depth, 2);
        parts.push(prefix.into_iter().rev().fold(matrix, |body, (q, v)| Formula::Quant(q, v, Box::new(body))));
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Formula::And(parts)
    }
}

fn matrix(rng: &mut Rng8, voc: &Vocab, vars: &[Variable], depth: usize, nest: usize) -> Formula {
    if nest > 0 && rng.gen_bool(0.5) {
        let parts: Vec<Formula> = (0..rng.gen_range(2..=3)).map(|_| matrix(rng, voc, vars, depth, nest - 1)).collect();
        return match rng.gen_range(0..4) {
            0 => Formula::And(parts),
            1 => Formula::implies(parts[0].clone(), parts[1].clone()),
            _ => Formula::Or(parts),
        };
    }
    match literal(rng, voc, vars, depth) {
        Some(l) => Formula::literal(&l),
        None => Formula::truth(),
    }
}

/// True when some term of a function's result sort can be an argument
/// of a function, directly or through a chain. Such signatures have an
/// infinite ground universe.
pub fn functions_cyclic(sig: &Signature) -> bool {
    let h = sig.hierarchy();
    let fs: Vec<_> = sig.functions().iter().filter(|(_, d)| !d.args.is_empty()).collect();
    let feeds = |a: usize, b: usize| fs[b].1.args.iter().any(|s| h.le(&fs[a].1.result, s));
    let n = fs.len();
    let mut reach = vec![vec![false; n]; n];
    for (a, row) in reach.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = feeds(a, b);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    (0..n).any(|i| reach[i][i])
}

/// Declares `count` predicates `P0..` with 1 or 2 argument sorts.
pub fn predicates(rng: &mut Rng8, sig: &mut Signature, count: usize) -> Vec<Symbol> {
    (0..count)
        .map(|i| {
            let name = Symbol::new(&format!("P{i}"));
            let args: Vec<Sort> = (0..rng.gen_range(1..=2)).map(|_| any_sort(rng, sig)).collect();
            sig.declare_predicate(name.clone(), args).unwrap();
            name
        })
        .collect()
}

/// Declares a unary function whose result sort cannot feed its own
/// argument, or nothing when no such pair exists.
pub fn acyclic_function(rng: &mut Rng8, sig: &mut Signature, name: &str) -> Option<Symbol> {
    let sorts = proper_sorts(sig.hierarchy());
    let pairs: Vec<(Sort, Sort)> = sorts
        .iter()
        .flat_map(|a| sorts.iter().map(move |r| (a.clone(), r.clone())))
        .filter(|(a, r)| !sig.hierarchy().le(r, a))
        .collect();
    let (a, r) = pairs.choose(rng)?.clone();
    let mut trial = sig.clone();
    trial.declare_function(Symbol::new(name), vec![a], r).ok()?;
    if functions_cyclic(&trial) {
        return None;
    }
    *sig = trial;
    Some(Symbol::new(name))
}

/// An agent tree: parent index of every non-root agent.
pub fn tree(rng: &mut Rng8, n: usize) -> Vec<Option<usize>> {
    (0..n).map(|i| if i == 0 { None } else { Some(rng.gen_range(0..i)) }).collect()
}

/// A connected set of agents: a random top plus some descendants joined
/// to it through their ancestors.
pub fn carrier(rng: &mut Rng8, parent: &[Option<usize>]) -> BTreeSet<usize> {
    let n = parent.len();
    let top = rng.gen_range(0..n);
    let below: Vec<usize> = (0..n)
        .filter(|&a| {
            let mut x = a;
            loop {
                if x == top {
                    return a != top;
                }
                match parent[x] {
                    Some(p) => x = p,
                    None => return false,
                }
            }
        })
        .collect();
    let mut set = BTreeSet::from([top]);
    for &d in &below {
        if rng.gen_bool(0.6) {
            let mut x = d;
            while x != top {
                set.insert(x);
                x = parent[x].unwrap();
            }
        }
    }
    set
}
