//! Problem files, clause lists and formulas.
//!
//! A problem is a sequence of bracketed sections:
//!
//! ```text
//! [sorts]
//! sort W < A
//! witness w : W
//! [network]
//! decider x
//! [agent y]
//! reports-to x
//! pred E : (A, TOP)
//! func h : (C) -> P
//! clause E(c1:C, h(c1:C))
//! [query]
//! exists a:A. E(a:A, a:A)
//! ```
//!
//! A file without agent sections may use `[signature]` and `[clauses]`
//! instead; it becomes a single agent `main` that is its own decider.

use std::collections::{BTreeMap, BTreeSet};

use osfol_core::network::{Agent, AgentNetwork};
use osfol_core::sorts::{Sort, SortHierarchy};
use osfol_core::syntax::{Atom, Clause, Formula, Literal, Quantifier, Signature, Symbol, Term, Variable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Complete the sort order with synthetic meets instead of rejecting
    /// pairs without a unique greatest lower bound.
    pub synthesize_glbs: bool,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub network: AgentNetwork,
    pub query: Option<Formula>,
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Tilde,
    Bar,
    Amp,
    Arrow,
    Lt,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Lt => f.write_str("`<`"),
        }
    }
}

/// Tokens with (line, column), 1-based.
#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str, line: usize, first_column: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = first_column + i;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '~' | '¬' => Some(Tok::Tilde),
            '|' => Some(Tok::Bar),
            '&' => Some(Tok::Amp),
            '<' => Some(Tok::Lt),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line, column });
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Spanned { tok: Tok::Arrow, line, column });
            i += 2;
        } else if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line, column });
        } else {
            return err(line, column, format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

// --------------------------------------------------------------- parsing

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    /// Where to report running out of input.
    end: (usize, usize),
    bound: Vec<Variable>,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Spanned], end: (usize, usize)) -> Self {
        Parser { toks, pos: 0, end, bound: Vec::new() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.column))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        err(l, c, message)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.fail(format!("expected {t}, found {found}")),
                None => self.fail(format!("expected {t} at end of input")),
            }
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(t) => self.fail(format!("expected a name, found {t}")),
            None => self.fail("expected a name at end of input"),
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.fail(format!("unexpected {t}")),
        }
    }

    fn sort_list(&mut self) -> Result<Vec<Sort>, ParseError> {
        if self.eat(&Tok::LParen) {
            let mut out = Vec::new();
            if self.eat(&Tok::RParen) {
                return Ok(out);
            }
            loop {
                out.push(Sort::new(&self.ident()?));
                if self.eat(&Tok::RParen) {
                    return Ok(out);
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(vec![Sort::new(&self.ident()?)])
    }

    fn variable(&mut self) -> Result<Variable, ParseError> {
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let sort = self.ident()?;
        Ok(Variable::new(&name, Sort::new(&sort)))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = self.ident()?;
        if self.eat(&Tok::Colon) {
            let sort = self.ident()?;
            return Ok(Term::Var(Variable::new(&name, Sort::new(&sort))));
        }
        if self.eat(&Tok::LParen) {
            let args = self.terms_until_rparen()?;
            return Ok(Term::App(Symbol::new(&name), args));
        }
        if let Some(v) = self.bound.iter().rev().find(|v| v.name.name() == name) {
            return Ok(Term::Var(v.clone()));
        }
        Ok(Term::App(Symbol::new(&name), Vec::new()))
    }

    fn terms_until_rparen(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(Tok::Comma)?;
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::Bar) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::negation(self.unary()?));
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        if self.eat(&Tok::LBracket) {
            self.expect(Tok::RBracket)?;
            return Ok(Formula::falsity());
        }
        let q = match self.peek() {
            Some(Tok::Ident(s)) if s == "forall" => Some(Quantifier::Forall),
            Some(Tok::Ident(s)) if s == "exists" => Some(Quantifier::Exists),
            _ => None,
        };
        if let Some(q) = q {
            self.pos += 1;
            let mut vars = vec![self.variable()?];
            loop {
                self.eat(&Tok::Comma);
                if self.eat(&Tok::Dot) {
                    break;
                }
                vars.push(self.variable()?);
            }
            let depth = self.bound.len();
            self.bound.extend(vars.iter().cloned());
            let body = self.formula();
            self.bound.truncate(depth);
            return Ok(Formula::quantify(q, vars, body?));
        }
        match self.peek() {
            Some(Tok::Ident(s)) if s == "true" => {
                self.pos += 1;
                return Ok(Formula::truth());
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.pos += 1;
                return Ok(Formula::falsity());
            }
            _ => {}
        }
        let name = self.ident()?;
        let args = if self.eat(&Tok::LParen) { self.terms_until_rparen()? } else { Vec::new() };
        Ok(Formula::Atom(Atom { predicate: Symbol::new(&name), args }))
    }
}

fn literal_of(f: &Formula) -> Option<Literal> {
    match f {
        Formula::Atom(a) => Some(Literal::pos(a.clone())),
        Formula::Not(g) => match &**g {
            Formula::Atom(a) => Some(Literal::neg(a.clone())),
            _ => None,
        },
        _ => None,
    }
}

/// Reads `L1 | ... | Ln`, `[]` or `false` as a clause.
fn clause_of(f: &Formula) -> Option<Clause> {
    match f {
        Formula::Or(parts) => {
            let mut lits = Vec::new();
            for p in parts {
                lits.extend(clause_of(p)?.into_literals());
            }
            Some(Clause::new(lits))
        }
        _ => literal_of(f).map(|l| Clause::new(vec![l])),
    }
}

/// Parses a formula over `sig` and checks it.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut toks = Vec::new();
    let mut last = (1, 1);
    for (k, line) in text.lines().enumerate() {
        toks.extend(lex(line, k + 1, 1)?);
        last = (k + 1, line.chars().count() + 1);
    }
    let mut p = Parser::new(&toks, last);
    let f = p.formula()?;
    p.done()?;
    let first = toks.first().map_or((1, 1), |t| (t.line, t.column));
    sig.check_formula(&f).or_else(|e| err(first.0, first.1, e.to_string()))?;
    Ok(f)
}

/// Parses one clause over `sig` and checks it.
pub fn parse_clause(text: &str, sig: &Signature) -> Result<Clause, ParseError> {
    parse_clause_at(text, sig, 1, 1)
}

fn parse_clause_at(text: &str, sig: &Signature, line: usize, column: usize) -> Result<Clause, ParseError> {
    let toks = lex(text, line, column)?;
    let mut p = Parser::new(&toks, (line, column + text.chars().count()));
    let f = p.formula()?;
    p.done()?;
    let Some(c) = clause_of(&f) else {
        return err(line, column, "a clause is a disjunction of literals");
    };
    sig.check_clause(&c).or_else(|e| err(line, column, e.to_string()))?;
    Ok(c)
}

// -------------------------------------------------------------- sections

struct Line<'a> {
    number: usize,
    /// Column of the first character of `text`.
    column: usize,
    text: &'a str,
}

struct Section<'a> {
    kind: String,
    arg: Option<String>,
    line: usize,
    body: Vec<Line<'a>>,
}

fn strip_comment(s: &str) -> &str {
    match s.find('#') {
        Some(p) => &s[..p],
        None => s,
    }
}

fn split_sections(text: &str) -> Result<Vec<Section<'_>>, ParseError> {
    let mut out: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let number = k + 1;
        let content = strip_comment(raw);
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = content.chars().take_while(|c| c.is_whitespace()).count() + 1;
        if trimmed.starts_with('[') && trimmed.ends_with(']') && trimmed != "[]" {
            let inner = trimmed[1..trimmed.len() - 1].trim();
            let mut words = inner.split_whitespace();
            let kind = words.next().unwrap_or("").to_string();
            let arg = words.next().map(str::to_string);
            if words.next().is_some() {
                return err(number, column, "section headers take at most one name");
            }
            match (kind.as_str(), &arg) {
                ("agent", Some(_)) => {}
                ("agent", None) => return err(number, column, "`[agent]` needs an agent name"),
                ("sorts" | "network" | "query" | "signature" | "clauses", None) => {}
                _ => return err(number, column, format!("unknown section `[{inner}]`")),
            }
            out.push(Section { kind, arg, line: number, body: Vec::new() });
            continue;
        }
        match out.last_mut() {
            Some(s) => s.body.push(Line { number, column, text: trimmed }),
            None => return err(number, column, "text before the first section"),
        }
    }
    Ok(out)
}

fn first_word(text: &str) -> (&str, &str) {
    match text.find(char::is_whitespace) {
        Some(p) => (&text[..p], text[p..].trim_start()),
        None => (text, ""),
    }
}

fn rest_column(line: &Line, rest: &str) -> usize {
    line.column + line.text.chars().count() - rest.chars().count()
}

fn build_hierarchy(sections: &[Section], options: &ParseOptions) -> Result<SortHierarchy, ParseError> {
    let mut sorts: Vec<Sort> = Vec::new();
    let mut edges: Vec<(Sort, Sort)> = Vec::new();
    let mut witnesses: Vec<(Symbol, Sort, usize, usize)> = Vec::new();
    let mut first = None;
    for s in sections.iter().filter(|s| s.kind == "sorts") {
        first.get_or_insert(s.line);
        for line in &s.body {
            let (kw, rest) = first_word(line.text);
            let toks = lex(rest, line.number, rest_column(line, rest))?;
            let mut p = Parser::new(&toks, (line.number, line.column + line.text.chars().count()));
            match kw {
                "sort" => {
                    let name = Sort::new(&p.ident()?);
                    if !sorts.contains(&name) {
                        sorts.push(name.clone());
                    }
                    if p.eat(&Tok::Lt) {
                        loop {
                            let sup = Sort::new(&p.ident()?);
                            if !sup.is_top() && !sup.is_bottom() && !sorts.contains(&sup) {
                                sorts.push(sup.clone());
                            }
                            edges.push((name.clone(), sup));
                            if !p.eat(&Tok::Comma) {
                                break;
                            }
                        }
                    }
                    p.done()?;
                }
                "witness" => {
                    let c = Symbol::new(&p.ident()?);
                    p.expect(Tok::Colon)?;
                    let (l, col) = p.here();
                    let sort = Sort::new(&p.ident()?);
                    p.done()?;
                    witnesses.push((c, sort, l, col));
                }
                _ => return err(line.number, line.column, format!("expected `sort` or `witness`, found `{kw}`")),
            }
        }
    }
    for s in &sorts {
        if s.is_top() || s.is_bottom() {
            return err(first.unwrap_or(1), 1, format!("`{s}` is built in and cannot be declared"));
        }
    }
    let mut h = SortHierarchy::new(sorts, edges).or_else(|e| err(first.unwrap_or(1), 1, e.to_string()))?;
    for (c, sort, l, col) in witnesses {
        h.add_witness(c, &sort).or_else(|e| err(l, col, e.to_string()))?;
    }
    if options.synthesize_glbs {
        h = h.synthesize_glbs();
    } else if let Err(e) = h.check_glbs() {
        return err(first.unwrap_or(1), 1, format!("{e} (use --synthesize-glbs to add meets)"));
    }
    if let Some(s) = h.unwitnessed().into_iter().next() {
        return err(first.unwrap_or(1), 1, format!("sort `{s}` has no witness constant"));
    }
    Ok(h)
}

/// Applies a `pred` or `func` line; returns the declared symbol.
fn declare(line: &Line, kw: &str, rest: &str, sig: &mut Signature) -> Result<Symbol, ParseError> {
    let toks = lex(rest, line.number, rest_column(line, rest))?;
    let mut p = Parser::new(&toks, (line.number, line.column + line.text.chars().count()));
    let (l, c) = p.here();
    let name = Symbol::new(&p.ident()?);
    let result = if kw == "pred" {
        let args = if p.eat(&Tok::Colon) { p.sort_list()? } else { Vec::new() };
        p.done()?;
        sig.declare_predicate(name.clone(), args)
    } else {
        p.expect(Tok::Colon)?;
        let first = p.sort_list()?;
        let (args, result) = if p.eat(&Tok::Arrow) {
            (first, Sort::new(&p.ident()?))
        } else if first.len() == 1 {
            (Vec::new(), first.into_iter().next().unwrap())
        } else {
            return p.fail("expected `->` and a result sort");
        };
        p.done()?;
        sig.declare_function(name.clone(), args, result)
    };
    result.or_else(|e| err(l, c, e.to_string()))?;
    Ok(name)
}

/// Parses a problem file.
pub fn parse_problem(text: &str, options: &ParseOptions) -> Result<Problem, ParseError> {
    let sections = split_sections(text)?;
    let hierarchy = build_hierarchy(&sections, options)?;
    let mut sig = Signature::new(hierarchy);
    let has_agents = sections.iter().any(|s| s.kind == "agent");
    let flat = sections.iter().find(|s| s.kind == "signature" || s.kind == "clauses");
    if let (true, Some(s)) = (has_agents, flat) {
        return err(s.line, 1, format!("`[{}]` cannot be combined with agent sections", s.kind));
    }

    // Declarations first, so clauses may use symbols declared later.
    let mut agents: Vec<Agent> = Vec::new();
    let mut parents: Vec<(Symbol, Symbol, usize)> = Vec::new();
    let mut flat_symbols = BTreeSet::new();
    let mut seen_agents = BTreeMap::new();
    for s in &sections {
        let agent = match (s.kind.as_str(), &s.arg) {
            ("agent", Some(id)) => {
                if seen_agents.insert(id.clone(), s.line).is_some() {
                    return err(s.line, 1, format!("agent `{id}` is declared twice"));
                }
                agents.push(Agent::new(id));
                Some(agents.len() - 1)
            }
            ("signature", _) => None,
            _ => continue,
        };
        for line in &s.body {
            let (kw, rest) = first_word(line.text);
            match kw {
                "pred" | "func" => {
                    let name = declare(line, kw, rest, &mut sig)?;
                    match agent {
                        Some(a) => {
                            agents[a].symbols.insert(name);
                        }
                        None => {
                            flat_symbols.insert(name);
                        }
                    }
                }
                "reports-to" if agent.is_some() => {
                    let target = rest.trim();
                    if target.is_empty() || target.contains(char::is_whitespace) {
                        return err(line.number, line.column, "`reports-to` takes one agent name");
                    }
                    let a = agent.unwrap();
                    parents.push((agents[a].id.clone(), Symbol::new(target), line.number));
                }
                "clause" if agent.is_some() => {}
                _ => {
                    let what =
                        if agent.is_some() { "`pred`, `func`, `reports-to` or `clause`" } else { "`pred` or `func`" };
                    return err(line.number, line.column, format!("expected {what}, found `{kw}`"));
                }
            }
        }
    }

    let mut decider = None;
    for s in sections.iter().filter(|s| s.kind == "network") {
        for line in &s.body {
            let (kw, rest) = first_word(line.text);
            if kw != "decider" || rest.is_empty() || rest.contains(char::is_whitespace) {
                return err(line.number, line.column, "expected `decider <agent>`");
            }
            if decider.is_some() {
                return err(line.number, line.column, "the decider is declared twice");
            }
            decider = Some((Symbol::new(rest), line.number));
        }
    }

    if !has_agents {
        let mut main = Agent::new("main");
        main.symbols = flat_symbols;
        for s in sections.iter().filter(|s| s.kind == "clauses") {
            for line in &s.body {
                main.kb.push(parse_clause_at(line.text, &sig, line.number, line.column)?);
            }
        }
        if let Some((d, l)) = decider {
            if d.name() != "main" {
                return err(l, 1, format!("unknown agent `{d}`"));
            }
        }
        let network =
            AgentNetwork { signature: sig, agents: vec![main], edges: Vec::new(), decider: Symbol::new("main") };
        let query = parse_query(&sections, &network.signature)?;
        return Ok(Problem { network, query });
    }

    for s in sections.iter().filter(|s| s.kind == "agent") {
        let id = s.arg.as_deref().unwrap();
        let a = agents.iter().position(|a| a.id.name() == id).unwrap();
        for line in &s.body {
            let (kw, rest) = first_word(line.text);
            if kw == "clause" {
                let c = parse_clause_at(rest, &sig, line.number, rest_column(line, rest))?;
                agents[a].kb.push(c);
            }
        }
    }
    let known: BTreeSet<&Symbol> = agents.iter().map(|a| &a.id).collect();
    for (u, v, l) in &parents {
        if !known.contains(v) {
            return err(*l, 1, format!("unknown agent `{v}`"));
        }
        if u == v {
            return err(*l, 1, format!("agent `{u}` reports to itself"));
        }
    }
    let decider = match decider {
        Some((d, l)) if !known.contains(&d) => return err(l, 1, format!("unknown agent `{d}`")),
        Some((d, _)) => d,
        None if agents.len() == 1 => agents[0].id.clone(),
        None => return err(1, 1, "a network with several agents needs `decider` in `[network]`"),
    };
    let edges = parents.into_iter().map(|(u, v, _)| (u, v)).collect();
    let network = AgentNetwork { signature: sig, agents, edges, decider };
    let query = parse_query(&sections, &network.signature)?;
    Ok(Problem { network, query })
}

fn parse_query(sections: &[Section], sig: &Signature) -> Result<Option<Formula>, ParseError> {
    let mut found = None;
    for s in sections.iter().filter(|s| s.kind == "query") {
        if found.is_some() {
            return err(s.line, 1, "only one `[query]` section is allowed");
        }
        let mut toks = Vec::new();
        for line in &s.body {
            toks.extend(lex(line.text, line.number, line.column)?);
        }
        if toks.is_empty() {
            return err(s.line, 1, "empty query");
        }
        let last = s.body.last().map_or((s.line, 1), |l| (l.number, l.column + l.text.chars().count()));
        let mut p = Parser::new(&toks, last);
        let f = p.formula()?;
        p.done()?;
        sig.check_formula(&f).or_else(|e| err(toks[0].line, toks[0].column, e.to_string()))?;
        found = Some(f);
    }
    Ok(found)
}

// -------------------------------------------------------------- printing

fn sort_profile(args: &[Sort]) -> String {
    let names: Vec<&str> = args.iter().map(Sort::name).collect();
    format!("({})", names.join(", "))
}

fn declaration(sig: &Signature, s: &Symbol) -> Option<String> {
    if let Some(args) = sig.predicate(s) {
        return Some(if args.is_empty() { format!("pred {s}") } else { format!("pred {s} : {}", sort_profile(args)) });
    }
    let f = sig.function(s)?;
    Some(if f.args.is_empty() {
        format!("func {s} : {}", f.result)
    } else {
        format!("func {s} : {} -> {}", sort_profile(&f.args), f.result)
    })
}

/// Prints a problem in the syntax accepted by [`parse_problem`].
pub fn print_problem(p: &Problem) -> String {
    use std::fmt::Write;
    let net = &p.network;
    let sig = &net.signature;
    let h = sig.hierarchy();
    let mut out = String::from("[sorts]\n");
    for s in h.sorts().iter().filter(|s| !s.is_top() && !s.is_bottom()) {
        writeln!(out, "sort {s}").unwrap();
    }
    for (a, b) in h.edges() {
        writeln!(out, "sort {a} < {b}").unwrap();
    }
    for (s, cs) in h.witnesses() {
        for c in cs {
            writeln!(out, "witness {c} : {s}").unwrap();
        }
    }
    writeln!(out, "\n[network]\ndecider {}", net.decider).unwrap();
    for a in &net.agents {
        writeln!(out, "\n[agent {}]", a.id).unwrap();
        for v in net.successors(&a.id) {
            writeln!(out, "reports-to {v}").unwrap();
        }
        for s in &a.symbols {
            if let Some(d) = declaration(sig, s) {
                writeln!(out, "{d}").unwrap();
            }
        }
        for c in &a.kb {
            writeln!(out, "clause {c}").unwrap();
        }
    }
    if let Some(q) = &p.query {
        writeln!(out, "\n[query]\n{q}").unwrap();
    }
    out
}
