//! Generators, transformations and brute-force reference implementations
//! shared by the property and acceptance tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cqscope::patterns::Candidate;
use cqscope::queryparse::*;
use cqscope::vocab::{self, PrefixTable};

pub const EX: &str = "http://example.org/onto#";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn prefixes() -> PrefixTable {
    let mut p = vocab::standard_prefixes();
    p.insert("ex".into(), EX.into());
    p
}

// ---------------------------------------------------------------------------
// Random queries

const PREDICATES: [(&str, &str); 7] = [
    ("rdfs", "subClassOf"),
    ("owl", "onProperty"),
    ("owl", "someValuesFrom"),
    ("owl", "allValuesFrom"),
    ("owl", "hasValue"),
    ("owl", "disjointWith"),
    ("owl", "equivalentClass"),
];

struct Gen<'r> {
    rng: &'r mut ChaCha8Rng,
    budget: usize,
    vars: BTreeSet<String>,
}

impl Gen<'_> {
    fn leaf(&mut self) -> Term {
        match self.rng.gen_range(0..10) {
            0..=2 => {
                let name = format!("x{}", self.rng.gen_range(0..4));
                self.vars.insert(name.clone());
                Term::var(&name)
            }
            3 => Term::placeholder(&format!("P{}", self.rng.gen_range(0..2))),
            4 => Term::BlankNodeLabel(format!("l{}", self.rng.gen_range(0..3))),
            5 => Term::AnonBlank(0),
            6 => Term::pname("owl", if self.rng.gen_bool(0.5) { "Nothing" } else { "Restriction" }),
            7 => Term::Iri(format!("{EX}C{}", self.rng.gen_range(0..5))),
            _ => Term::pname("ex", &format!("C{}", self.rng.gen_range(0..5))),
        }
    }

    fn predicate(&mut self) -> PropertyPath {
        PropertyPath::Atom(match self.rng.gen_range(0..10) {
            0 => Term::A,
            1 => Term::pname("ex", &format!("p{}", self.rng.gen_range(0..3))),
            2 => {
                let name = format!("x{}", self.rng.gen_range(0..4));
                self.vars.insert(name.clone());
                Term::var(&name)
            }
            _ => {
                let (p, l) = PREDICATES[self.rng.gen_range(0..PREDICATES.len())];
                Term::pname(p, l)
            }
        })
    }

    fn object(&mut self, depth: usize) -> Node {
        let roll = self.rng.gen_range(0..10);
        if depth < 2 && roll == 0 && self.budget >= 2 {
            let props = self.props(depth + 1, 2);
            if !props.is_empty() {
                return Node::BlankPropertyList(props);
            }
        }
        if depth < 2 && roll == 1 && self.budget >= 4 {
            self.budget -= 4;
            return Node::Collection(vec![Node::Term(self.leaf()), Node::Term(self.leaf())]);
        }
        Node::Term(self.leaf())
    }

    fn props(&mut self, depth: usize, max: usize) -> Vec<PropertyObjects> {
        let mut out = Vec::new();
        for _ in 0..self.rng.gen_range(1..=max) {
            if self.budget == 0 {
                break;
            }
            let predicate = self.predicate();
            let mut objects = Vec::new();
            for _ in 0..self.rng.gen_range(1..=2) {
                if self.budget == 0 {
                    break;
                }
                self.budget -= 1;
                objects.push(self.object(depth));
            }
            out.push(PropertyObjects { predicate, objects });
        }
        out
    }

    fn triples(&mut self, n: usize) -> Vec<TriplePattern> {
        let mut out = Vec::new();
        for _ in 0..n {
            if self.budget == 0 {
                break;
            }
            let subject = Node::Term(match self.leaf() {
                Term::Iri(_) | Term::PrefixedName { .. } if self.rng.gen_bool(0.5) => {
                    let name = format!("x{}", self.rng.gen_range(0..4));
                    self.vars.insert(name.clone());
                    Term::var(&name)
                }
                t => t,
            });
            let properties = self.props(0, 2);
            out.push(TriplePattern { subject, properties });
        }
        out
    }

    fn operand(&mut self) -> Expr {
        Expr::TermRef(match self.rng.gen_range(0..4) {
            0 | 1 if !self.vars.is_empty() => {
                let v: Vec<&String> = self.vars.iter().collect();
                Term::var(v[self.rng.gen_range(0..v.len())])
            }
            0 | 1 | 2 => Term::pname("ex", &format!("C{}", self.rng.gen_range(0..5))),
            _ => Term::pname("owl", "Nothing"),
        })
    }

    fn filter(&mut self) -> Option<Expr> {
        let n = self.rng.gen_range(0..=3);
        let mut conjuncts = Vec::new();
        for _ in 0..n {
            let op = match self.rng.gen_range(0..5) {
                0 => CompareOp::Eq,
                1 => CompareOp::Lt,
                _ => CompareOp::Ne,
            };
            conjuncts.push(Expr::Compare(op, Box::new(self.operand()), Box::new(self.operand())));
        }
        and_chain(conjuncts)
    }

    fn group(&mut self, depth: usize) -> GraphPattern {
        let mut children = Vec::new();
        let n = if depth == 0 { self.rng.gen_range(1..=4) } else { self.rng.gen_range(1..=2) };
        let ts = self.triples(n);
        if !ts.is_empty() {
            children.push(GraphPattern::Bgp(ts));
        }
        if depth == 0 && self.budget >= 1 {
            match self.rng.gen_range(0..6) {
                0 => children.push(GraphPattern::NotExists(Box::new(self.group(1)))),
                1 if self.budget >= 2 => {
                    let a = self.group(1);
                    let b = self.group(1);
                    children.push(GraphPattern::Union(Box::new(a), Box::new(b)));
                }
                _ => {}
            }
        }
        if let Some(f) = self.filter() {
            children.push(GraphPattern::Filter(f));
        }
        GraphPattern::Group(children)
    }
}

pub fn and_chain(conjuncts: Vec<Expr>) -> Option<Expr> {
    conjuncts.into_iter().reduce(|a, b| Expr::And(Box::new(a), Box::new(b)))
}

/// A random query with at most `max_triples` flattened triples, in the form
/// the parser produces for it.
pub fn random_query(rng: &mut ChaCha8Rng, max_triples: usize) -> QueryAst {
    loop {
        let budget = rng.gen_range(1..=max_triples);
        let mut g = Gen { rng, budget, vars: BTreeSet::new() };
        let where_clause = g.group(0);
        let vars: Vec<String> = g.vars.iter().cloned().collect();
        let ask = rng.gen_bool(0.2);
        let projection = if ask {
            None
        } else if vars.is_empty() || rng.gen_bool(0.5) {
            Some(Projection::Star)
        } else {
            Some(Projection::Vars(vec![Term::var(&vars[rng.gen_range(0..vars.len())])]))
        };
        let ast = QueryAst {
            verb: if ask { QueryVerb::Ask } else { QueryVerb::Select },
            distinct: !ask && rng.gen_bool(0.3),
            projection,
            where_clause,
            prefix_table: prefixes(),
            declared_prefixes: Vec::new(),
        };
        let n = ast.flat_triple_count();
        if n == 0 || n > max_triples {
            continue;
        }
        if let Ok(parsed) = parse_query(&serialize_query(&ast), &prefixes()) {
            return parsed;
        }
    }
}

// ---------------------------------------------------------------------------
// Transformations that must leave the signature unchanged

pub fn map_terms(ast: &QueryAst, f: &mut dyn FnMut(&Term) -> Term) -> QueryAst {
    let mut out = ast.clone();
    if let Some(Projection::Vars(vars)) = &mut out.projection {
        for v in vars.iter_mut() {
            *v = f(v);
        }
    }
    out.where_clause = map_pattern(&ast.where_clause, f);
    out
}

fn map_pattern(p: &GraphPattern, f: &mut dyn FnMut(&Term) -> Term) -> GraphPattern {
    match p {
        GraphPattern::Bgp(ts) => GraphPattern::Bgp(
            ts.iter()
                .map(|t| TriplePattern { subject: map_node(&t.subject, f), properties: map_props(&t.properties, f) })
                .collect(),
        ),
        GraphPattern::Group(c) => GraphPattern::Group(c.iter().map(|x| map_pattern(x, f)).collect()),
        GraphPattern::Filter(e) => GraphPattern::Filter(map_expr(e, f)),
        GraphPattern::Union(a, b) => GraphPattern::Union(Box::new(map_pattern(a, f)), Box::new(map_pattern(b, f))),
        GraphPattern::NotExists(i) => GraphPattern::NotExists(Box::new(map_pattern(i, f))),
        GraphPattern::Bind(e, v) => GraphPattern::Bind(map_expr(e, f), f(v)),
    }
}

fn map_props(props: &[PropertyObjects], f: &mut dyn FnMut(&Term) -> Term) -> Vec<PropertyObjects> {
    props
        .iter()
        .map(|po| PropertyObjects {
            predicate: match &po.predicate {
                PropertyPath::Atom(t) => PropertyPath::Atom(f(t)),
                other => other.clone(),
            },
            objects: po.objects.iter().map(|o| map_node(o, f)).collect(),
        })
        .collect()
}

fn map_node(n: &Node, f: &mut dyn FnMut(&Term) -> Term) -> Node {
    match n {
        Node::Term(t) => Node::Term(f(t)),
        Node::BlankPropertyList(p) => Node::BlankPropertyList(map_props(p, f)),
        Node::Collection(items) => Node::Collection(items.iter().map(|i| map_node(i, f)).collect()),
    }
}

fn map_expr(e: &Expr, f: &mut dyn FnMut(&Term) -> Term) -> Expr {
    let b = |x: &Expr, f: &mut dyn FnMut(&Term) -> Term| Box::new(map_expr(x, f));
    match e {
        Expr::Compare(op, x, y) => Expr::Compare(*op, b(x, f), b(y, f)),
        Expr::And(x, y) => Expr::And(b(x, f), b(y, f)),
        Expr::Or(x, y) => Expr::Or(b(x, f), b(y, f)),
        Expr::Not(x) => Expr::Not(b(x, f)),
        Expr::In { expr, list, negated } => {
            Expr::In { expr: b(expr, f), list: list.iter().map(|x| map_expr(x, f)).collect(), negated: *negated }
        }
        Expr::FnCall { name, args } => Expr::FnCall { name: name.clone(), args: args.iter().map(|x| map_expr(x, f)).collect() },
        Expr::Arith(op, x, y) => Expr::Arith(*op, b(x, f), b(y, f)),
        Expr::TermRef(t) => Expr::TermRef(f(t)),
        Expr::Paren(x) => Expr::Paren(b(x, f)),
    }
}

/// Renames every non-reserved IRI consistently to a fresh one.
pub fn rename_iris(ast: &QueryAst, rng: &mut ChaCha8Rng) -> QueryAst {
    let salt: u32 = rng.gen();
    let mut seen: HashMap<String, String> = HashMap::new();
    map_terms(ast, &mut |t| {
        let Ok(Some(iri)) = ast.resolve(t) else { return t.clone() };
        if vocab::is_reserved(&iri) {
            return t.clone();
        }
        let next = seen.len();
        let fresh = seen.entry(iri).or_insert_with(|| format!("http://renamed.example/{salt}/R{next}")).clone();
        Term::Iri(fresh)
    })
}

/// Applies a random bijection to `?` variable names.
pub fn rename_vars(ast: &QueryAst, rng: &mut ChaCha8Rng) -> QueryAst {
    let mut names = BTreeSet::new();
    ast.for_each_term(&mut |t| {
        if let Term::Variable { name, marker: VarMarker::Question } = t {
            names.insert(name.clone());
        }
    });
    let names: Vec<String> = names.into_iter().collect();
    let mut targets: Vec<String> = (0..names.len()).map(|i| format!("r{i}")).collect();
    targets.shuffle(rng);
    let map: HashMap<&String, &String> = names.iter().zip(&targets).collect();
    map_terms(ast, &mut |t| match t {
        Term::Variable { name, marker: VarMarker::Question } => Term::var(map[name]),
        other => other.clone(),
    })
}

/// Applies a random bijection to blank-node labels.
pub fn relabel_blanks(ast: &QueryAst, rng: &mut ChaCha8Rng) -> QueryAst {
    let mut labels = BTreeSet::new();
    ast.for_each_term(&mut |t| {
        if let Term::BlankNodeLabel(l) = t {
            labels.insert(l.clone());
        }
    });
    let labels: Vec<String> = labels.into_iter().collect();
    let mut targets: Vec<String> = (0..labels.len()).map(|i| format!("q{i}")).collect();
    targets.shuffle(rng);
    let map: HashMap<&String, &String> = labels.iter().zip(&targets).collect();
    map_terms(ast, &mut |t| match t {
        Term::BlankNodeLabel(l) => Term::BlankNodeLabel(map[l].clone()),
        other => other.clone(),
    })
}

/// Shuffles triples (subjects, `;` lists and `,` lists) within every group.
pub fn permute_triples(ast: &QueryAst, rng: &mut ChaCha8Rng) -> QueryAst {
    fn props(ps: &mut Vec<PropertyObjects>, rng: &mut ChaCha8Rng) {
        ps.shuffle(rng);
        for po in ps.iter_mut() {
            po.objects.shuffle(rng);
            for o in po.objects.iter_mut() {
                if let Node::BlankPropertyList(inner) = o {
                    props(inner, rng);
                }
            }
        }
    }
    fn walk(p: &mut GraphPattern, rng: &mut ChaCha8Rng) {
        match p {
            GraphPattern::Bgp(ts) => {
                ts.shuffle(rng);
                for t in ts.iter_mut() {
                    props(&mut t.properties, rng);
                }
            }
            GraphPattern::Group(c) => c.iter_mut().for_each(|x| walk(x, rng)),
            GraphPattern::Union(a, b) => {
                walk(a, rng);
                walk(b, rng);
            }
            GraphPattern::NotExists(i) => walk(i, rng),
            _ => {}
        }
    }
    let mut out = ast.clone();
    walk(&mut out.where_clause, rng);
    out
}

fn split_and(e: &Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::And(a, b) => {
            split_and(a, out);
            split_and(b, out);
        }
        other => out.push(other.clone()),
    }
}

/// Shuffles the `&&` conjuncts of every FILTER.
pub fn permute_conjuncts(ast: &QueryAst, rng: &mut ChaCha8Rng) -> QueryAst {
    fn walk(p: &mut GraphPattern, rng: &mut ChaCha8Rng) {
        match p {
            GraphPattern::Filter(e) => {
                let mut cs = Vec::new();
                split_and(e, &mut cs);
                cs.shuffle(rng);
                *e = and_chain(cs).expect("nonempty filter");
            }
            GraphPattern::Group(c) => c.iter_mut().for_each(|x| walk(x, rng)),
            GraphPattern::Union(a, b) => {
                walk(a, rng);
                walk(b, rng);
            }
            GraphPattern::NotExists(i) => walk(i, rng),
            _ => {}
        }
    }
    let mut out = ast.clone();
    walk(&mut out.where_clause, rng);
    out
}

/// Swaps the operands of `!=` comparisons at random.
pub fn swap_ne_operands(ast: &QueryAst, rng: &mut ChaCha8Rng) -> QueryAst {
    fn expr(e: &mut Expr, rng: &mut ChaCha8Rng) {
        match e {
            Expr::Compare(CompareOp::Ne, a, b) => {
                if rng.gen_bool(0.5) {
                    std::mem::swap(a, b);
                }
            }
            Expr::And(a, b) | Expr::Or(a, b) => {
                expr(a, rng);
                expr(b, rng);
            }
            Expr::Not(a) | Expr::Paren(a) => expr(a, rng),
            _ => {}
        }
    }
    fn walk(p: &mut GraphPattern, rng: &mut ChaCha8Rng) {
        match p {
            GraphPattern::Filter(e) => expr(e, rng),
            GraphPattern::Group(c) => c.iter_mut().for_each(|x| walk(x, rng)),
            GraphPattern::Union(a, b) => {
                walk(a, rng);
                walk(b, rng);
            }
            GraphPattern::NotExists(i) => walk(i, rng),
            _ => {}
        }
    }
    let mut out = ast.clone();
    walk(&mut out.where_clause, rng);
    out
}

pub type Transform = fn(&QueryAst, &mut ChaCha8Rng) -> QueryAst;

pub const TRANSFORMS: [(&str, Transform); 6] = [
    ("IRI renaming", rename_iris),
    ("variable renaming", rename_vars),
    ("blank relabeling", relabel_blanks),
    ("triple permutation", permute_triples),
    ("conjunct permutation", permute_conjuncts),
    ("!= operand swap", swap_ne_operands),
];

// ---------------------------------------------------------------------------
// Brute-force canonical form for flat queries

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    S(String),
    V(u32),
    B(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slot {
    Const(String),
    Var(String),
    Blank(String),
}

/// A query whose WHERE clause is one group of plain triples and filter
/// conjuncts `a op b` over plain terms.
#[derive(Debug, Clone)]
pub struct FlatQuery {
    pub triples: Vec<[Slot; 3]>,
    pub filters: Vec<(CompareOp, Slot, Slot)>,
}

const FLAT_CLASSES: [&str; 3] = ["ex:A", "ex:B", "<http://other.example/C>"];
const FLAT_PREDICATES: [&str; 4] = ["rdfs:subClassOf", "owl:onProperty", "owl:someValuesFrom", "a"];

impl FlatQuery {
    pub fn random(rng: &mut ChaCha8Rng, max_triples: usize) -> (FlatQuery, String) {
        let slot = |rng: &mut ChaCha8Rng, pos: usize| -> (Slot, String) {
            let roll = rng.gen_range(0..10);
            if pos == 1 && roll < 7 {
                let p = FLAT_PREDICATES[rng.gen_range(0..FLAT_PREDICATES.len())];
                let abstracted = match p {
                    "a" => "rdf:type".to_string(),
                    other => other.to_string(),
                };
                return (Slot::Const(abstracted), p.to_string());
            }
            match roll {
                0..=3 => {
                    let v = format!("v{}", rng.gen_range(0..3));
                    (Slot::Var(v.clone()), format!("?{v}"))
                }
                4..=5 => {
                    let b = format!("b{}", rng.gen_range(0..3));
                    (Slot::Blank(b.clone()), format!("_:{b}"))
                }
                6 => (Slot::Const("owl:Nothing".into()), "owl:Nothing".into()),
                _ => (Slot::Const(":URI".into()), FLAT_CLASSES[rng.gen_range(0..FLAT_CLASSES.len())].into()),
            }
        };
        let n = rng.gen_range(1..=max_triples);
        let mut triples = Vec::new();
        let mut text = String::from("SELECT * WHERE {\n");
        for _ in 0..n {
            let (s, st) = slot(rng, 0);
            let (p, pt) = slot(rng, 1);
            let (o, ot) = slot(rng, 2);
            text.push_str(&format!("  {st} {pt} {ot} .\n"));
            triples.push([s, p, o]);
        }
        let mut filters = Vec::new();
        let mut conj = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            let op = match rng.gen_range(0..4) {
                0 => CompareOp::Eq,
                1 => CompareOp::Lt,
                _ => CompareOp::Ne,
            };
            let (a, at) = slot(rng, 2);
            let (b, bt) = slot(rng, 2);
            // blank nodes are not expressions
            if matches!(a, Slot::Blank(_)) || matches!(b, Slot::Blank(_)) {
                continue;
            }
            conj.push(format!("{at} {} {bt}", op.symbol()));
            filters.push((op, a, b));
        }
        if !conj.is_empty() {
            text.push_str(&format!("  FILTER({})\n", conj.join(" && ")));
        }
        text.push('}');
        (FlatQuery { triples, filters }, text)
    }

    /// Minimum rendering over every triple order, conjunct order and
    /// operand order of symmetric comparisons.
    pub fn brute_force_skeleton(&self) -> String {
        let mut best: Option<Vec<Vec<Atom>>> = None;
        let symmetric: Vec<usize> =
            (0..self.filters.len()).filter(|&i| matches!(self.filters[i].0, CompareOp::Eq | CompareOp::Ne)).collect();
        for tp in permutations(self.triples.len()) {
            for fp in permutations(self.filters.len()) {
                for mask in 0..(1u32 << symmetric.len()) {
                    let mut vars: HashMap<String, u32> = HashMap::new();
                    let mut blanks: HashMap<String, u32> = HashMap::new();
                    let mut atom = |s: &Slot| -> Atom {
                        match s {
                            Slot::Const(c) => Atom::S(c.clone()),
                            Slot::Var(v) => {
                                let n = vars.len() as u32 + 1;
                                Atom::V(*vars.entry(v.clone()).or_insert(n))
                            }
                            Slot::Blank(b) => {
                                let n = blanks.len() as u32 + 1;
                                Atom::B(*blanks.entry(b.clone()).or_insert(n))
                            }
                        }
                    };
                    let mut items = vec![vec![Atom::S("{".into())]];
                    for &i in &tp {
                        let [s, p, o] = &self.triples[i];
                        items.push(vec![atom(s), atom(p), atom(o), Atom::S(".".into())]);
                    }
                    for &i in &fp {
                        let (op, a, b) = &self.filters[i];
                        let flip = symmetric.iter().position(|&k| k == i).is_some_and(|bit| mask >> bit & 1 == 1);
                        let (a, b) = if flip { (b, a) } else { (a, b) };
                        items.push(vec![
                            Atom::S("FILTER".into()),
                            Atom::S("(".into()),
                            atom(a),
                            Atom::S(op.symbol().into()),
                            atom(b),
                            Atom::S(")".into()),
                        ]);
                    }
                    items.push(vec![Atom::S("}".into())]);
                    if best.as_ref().map_or(true, |b| items < *b) {
                        best = Some(items);
                    }
                }
            }
        }
        best.unwrap_or_default()
            .iter()
            .flatten()
            .map(|a| match a {
                Atom::S(s) => s.clone(),
                Atom::V(n) => format!("?v{n}"),
                Atom::B(n) => format!("_:b{n}"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Pattern strings and candidate corpora

const WORDS: [&str; 24] = [
    "What", "Which", "which", "are", "is", "there", "any", "of", "for", "in", "with", "from", "kind", "we",
    "does", "did", "has", "will", "possible", "the", "types", "Are", "to", "and",
];

/// A random pattern string over slot tokens and the words the normalization
/// rules look at.
pub fn random_pattern(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(1..=9);
    (0..n)
        .map(|_| match rng.gen_range(0..10) {
            0..=2 => format!("EC{}", rng.gen_range(1..=4)),
            3 => format!("PC{}", rng.gen_range(1..=3)),
            _ => WORDS[rng.gen_range(0..WORDS.len())].to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn slot_kinds(text: &str) -> Vec<&'static str> {
    text.split_whitespace()
        .filter_map(|t| {
            let digits = t.get(2..).map_or(0, |r| r.chars().take_while(char::is_ascii_digit).count());
            match t.get(..2) {
                Some("EC") if digits > 0 => Some("EC"),
                Some("PC") if digits > 0 => Some("PC"),
                _ => None,
            }
        })
        .collect()
}

pub fn is_subsequence<T: PartialEq>(small: &[T], big: &[T]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

const CANDIDATE_TEXTS: [&str; 6] =
    ["What EC1 PC1 EC2", "Which EC1 PC1 EC2", "What is EC1", "Is EC1 EC2", "What EC1 PC1 EC2 in EC3", "How many EC1"];

pub fn random_candidate(rng: &mut ChaCha8Rng, index: usize) -> Candidate {
    let base = CANDIDATE_TEXTS[rng.gen_range(0..CANDIDATE_TEXTS.len())];
    // surface variants that compare equal: initial case and spacing
    let text = match rng.gen_range(0..3) {
        0 => base.to_string(),
        1 => {
            let mut c = base.chars();
            c.next().map(|f| f.to_lowercase().chain(c).collect()).unwrap_or_default()
        }
        _ => format!(" {}  ", base.replace(' ', "  ")),
    };
    Candidate {
        cq_id: format!("cq{index}"),
        ontology: ["A", "B", "C"][rng.gen_range(0..3)].to_string(),
        dematerialized: rng.gen_bool(0.3),
        text,
    }
}

pub fn random_candidates(rng: &mut ChaCha8Rng, max: usize) -> Vec<Candidate> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|i| random_candidate(rng, i)).collect()
}

/// Accepted pattern text to its supporting CQ ids, by the definition: a
/// candidate is kept if its CQ is dematerialized or another CQ yields the
/// same text up to initial case and spacing.
pub fn brute_force_filter(candidates: &[Candidate]) -> BTreeMap<String, BTreeSet<String>> {
    let key = |t: &str| {
        let t = t.split_whitespace().collect::<Vec<_>>().join(" ");
        let mut c = t.chars();
        c.next().map(|f| f.to_uppercase().chain(c).collect::<String>()).unwrap_or_default()
    };
    let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for c in candidates {
        let k = key(&c.text);
        let shared = candidates.iter().any(|d| d.cq_id != c.cq_id && key(&d.text) == k);
        if c.dematerialized || shared {
            out.entry(k).or_default().insert(c.cq_id.clone());
        }
    }
    out
}
