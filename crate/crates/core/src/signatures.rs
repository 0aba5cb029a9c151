//! URI-agnostic query signatures.
//!
//! A query is abstracted (domain IRIs and `$` placeholders become `:URI`,
//! literals become `:LIT` with their datatype or language kept) and its
//! WHERE clause flattened into plain triples: blank-node property lists get
//! fresh blank nodes, collections become `rdf:first`/`rdf:rest` chains and
//! every BGP of a group is merged into one triple set. FILTER conjuncts of a
//! group are pooled into a second set.
//!
//! The skeleton is the minimum, over all orderings of every triple set and
//! conjunct set and both operand orders of every `=` and `!=`, of the
//! rendering in which variables and blank nodes are named `?v1, ?v2, ...` and
//! `_:b1, _:b2, ...` by first occurrence. Renderings are compared item by
//! item as token sequences; within an item, constant tokens sort before
//! variables, variables before blank nodes, constants by string and
//! variables/blanks by their number.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::queryparse::*;
use crate::vocab;

pub const DEFAULT_MAX_TRIPLES: usize = 16;
const LEAF_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("query has {triples} triples after flattening, above the bound of {max}")]
    TooManyTriples { triples: usize, max: usize },
    #[error("canonical ordering search exceeded {0} candidate orderings")]
    SearchLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ProjectionKind {
    Star,
    Vars,
    /// ASK queries.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    pub verb: QueryVerb,
    pub distinct: bool,
    pub projection: ProjectionKind,
    /// Canonical rendering of the abstracted WHERE clause.
    pub skeleton: String,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.verb.keyword())?;
        if self.distinct {
            f.write_str(" DISTINCT")?;
        }
        match self.projection {
            ProjectionKind::Star => f.write_str(" *")?,
            ProjectionKind::Vars => f.write_str(" ?vars")?,
            ProjectionKind::None => {}
        }
        write!(f, " WHERE {}", self.skeleton)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CanonOptions {
    pub max_triples: usize,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions { max_triples: DEFAULT_MAX_TRIPLES }
    }
}

pub fn canonicalize(ast: &QueryAst) -> Result<Signature, SignatureError> {
    canonicalize_with(ast, CanonOptions::default())
}

pub fn canonicalize_with(ast: &QueryAst, opts: CanonOptions) -> Result<Signature, SignatureError> {
    let triples = ast.flat_triple_count();
    if triples > opts.max_triples {
        return Err(SignatureError::TooManyTriples { triples, max: opts.max_triples });
    }
    let program = Program::build(ast);
    let skeleton = program.canonical()?;
    Ok(Signature {
        verb: ast.verb,
        distinct: ast.distinct,
        projection: match ast.projection {
            Some(Projection::Star) => ProjectionKind::Star,
            Some(Projection::Vars(_)) => ProjectionKind::Vars,
            None => ProjectionKind::None,
        },
        skeleton,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SignatureGroup {
    /// `S1`, `S2`, ... in report order.
    pub id: String,
    pub signature: Signature,
    pub members: Vec<String>,
    pub cumulative_coverage: f64,
}

impl SignatureGroup {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SignatureGrouping {
    pub groups: Vec<SignatureGroup>,
    /// Queries left out, with the reason.
    pub skipped: Vec<(String, String)>,
    pub total: usize,
}

impl SignatureGrouping {
    pub fn group_of(&self, query_id: &str) -> Option<&SignatureGroup> {
        self.groups.iter().find(|g| g.members.iter().any(|m| m == query_id))
    }

    /// Cumulative share (percent) of grouped queries covered by the `k`
    /// largest groups.
    pub fn top_coverage(&self, k: usize) -> f64 {
        match k.min(self.groups.len()) {
            0 => 0.0,
            n => self.groups[n - 1].cumulative_coverage,
        }
    }
}

/// Partitions queries by signature. Groups are sorted by size, descending,
/// then by rendered signature.
pub fn group_by_signature<'a>(
    queries: impl IntoIterator<Item = (&'a str, &'a QueryAst)>,
    opts: CanonOptions,
) -> SignatureGrouping {
    let mut by_sig: BTreeMap<Signature, Vec<String>> = BTreeMap::new();
    let mut skipped = Vec::new();
    for (id, ast) in queries {
        match canonicalize_with(ast, opts) {
            Ok(sig) => by_sig.entry(sig).or_default().push(id.to_string()),
            Err(e) => skipped.push((id.to_string(), e.to_string())),
        }
    }
    let total: usize = by_sig.values().map(Vec::len).sum();
    let mut groups: Vec<(Signature, Vec<String>)> = by_sig.into_iter().collect();
    groups.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
    let mut covered = 0;
    let groups = groups
        .into_iter()
        .enumerate()
        .map(|(i, (signature, members))| {
            covered += members.len();
            SignatureGroup {
                id: format!("S{}", i + 1),
                signature,
                members,
                cumulative_coverage: 100.0 * covered as f64 / total as f64,
            }
        })
        .collect();
    SignatureGrouping { groups, skipped, total }
}

// ---------------------------------------------------------------------------
// Flattening

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum NodeRef {
    Const(String),
    Var(u32),
    Blank(u32),
}

#[derive(Debug, Clone)]
enum AExpr {
    Compare(CompareOp, Box<AExpr>, Box<AExpr>),
    And(Box<AExpr>, Box<AExpr>),
    Or(Box<AExpr>, Box<AExpr>),
    Not(Box<AExpr>),
    In(Box<AExpr>, Vec<AExpr>, bool),
    Call(String, Vec<AExpr>),
    Arith(&'static str, Box<AExpr>, Box<AExpr>),
    Node(NodeRef),
}

#[derive(Debug, Clone)]
enum Item {
    Triple([NodeRef; 3]),
    Filter(AExpr),
    Bind(AExpr, NodeRef),
}

#[derive(Debug, Clone)]
enum Seg {
    Lit(&'static str),
    Set(Vec<usize>),
    One(usize),
}

struct Program {
    items: Vec<Item>,
    segs: Vec<Seg>,
    /// Occurrence count of every variable/blank node across all items.
    occurrences: HashMap<NodeRef, usize>,
}

struct Builder<'q> {
    ast: &'q QueryAst,
    items: Vec<Item>,
    segs: Vec<Seg>,
    vars: HashMap<String, u32>,
    labels: HashMap<String, u32>,
    next_var: u32,
    next_blank: u32,
}

impl<'q> Builder<'q> {
    fn fresh_blank(&mut self) -> NodeRef {
        self.next_blank += 1;
        NodeRef::Blank(self.next_blank)
    }

    fn iri_token(&self, t: &Term) -> String {
        match self.ast.resolve(t) {
            Ok(Some(iri)) => vocab::compact_reserved(&iri).unwrap_or_else(|| ":URI".to_string()),
            _ => ":URI".to_string(),
        }
    }

    fn term(&mut self, t: &Term) -> NodeRef {
        match t {
            Term::Iri(_) | Term::PrefixedName { .. } | Term::A => NodeRef::Const(self.iri_token(t)),
            Term::Variable { marker: VarMarker::Placeholder, .. } => NodeRef::Const(":URI".into()),
            Term::Variable { name, .. } => {
                let next = self.next_var + 1;
                let id = *self.vars.entry(name.clone()).or_insert(next);
                if id == next {
                    self.next_var = next;
                }
                NodeRef::Var(id)
            }
            Term::BlankNodeLabel(label) => {
                if let Some(id) = self.labels.get(label) {
                    return NodeRef::Blank(*id);
                }
                let NodeRef::Blank(id) = self.fresh_blank() else { unreachable!() };
                self.labels.insert(label.clone(), id);
                NodeRef::Blank(id)
            }
            Term::AnonBlank(_) => self.fresh_blank(),
            Term::Literal { datatype, language, .. } => {
                let mut s = ":LIT".to_string();
                if let Some(lang) = language {
                    s.push('@');
                    s.push_str(lang);
                } else if let Some(dt) = datatype {
                    s.push_str("^^");
                    s.push_str(&self.iri_token(dt));
                }
                NodeRef::Const(s)
            }
        }
    }

    fn path(&mut self, p: &PropertyPath) -> NodeRef {
        match p {
            PropertyPath::Atom(t) => self.term(t),
            other => NodeRef::Const(self.path_text(other)),
        }
    }

    fn path_text(&mut self, p: &PropertyPath) -> String {
        match p {
            PropertyPath::Atom(t) => match self.term(t) {
                NodeRef::Const(s) => s,
                _ => "?".to_string(),
            },
            PropertyPath::Sequence(parts) => parts.iter().map(|q| self.path_text(q)).collect::<Vec<_>>().join("/"),
            PropertyPath::ZeroOrMore(inner) => format!("{}*", self.path_text(inner)),
        }
    }

    fn node(&mut self, n: &Node, out: &mut Vec<usize>) -> NodeRef {
        match n {
            Node::Term(t) => self.term(t),
            Node::BlankPropertyList(props) => {
                let b = self.fresh_blank();
                self.props(&b, props, out);
                b
            }
            Node::Collection(items) => {
                let nil = NodeRef::Const("rdf:nil".into());
                let mut head = nil.clone();
                let mut prev: Option<NodeRef> = None;
                for item in items {
                    let cell = self.fresh_blank();
                    let value = self.node(item, out);
                    self.push_triple([cell.clone(), NodeRef::Const("rdf:first".into()), value], out);
                    match prev {
                        Some(p) => self.push_triple([p, NodeRef::Const("rdf:rest".into()), cell.clone()], out),
                        None => head = cell.clone(),
                    }
                    prev = Some(cell);
                }
                if let Some(p) = prev {
                    self.push_triple([p, NodeRef::Const("rdf:rest".into()), nil], out);
                }
                head
            }
        }
    }

    fn props(&mut self, subject: &NodeRef, props: &[PropertyObjects], out: &mut Vec<usize>) {
        for po in props {
            let p = self.path(&po.predicate);
            for o in &po.objects {
                let o = self.node(o, out);
                self.push_triple([subject.clone(), p.clone(), o], out);
            }
        }
    }

    fn push_triple(&mut self, t: [NodeRef; 3], out: &mut Vec<usize>) {
        self.items.push(Item::Triple(t));
        out.push(self.items.len() - 1);
    }

    fn expr(&mut self, e: &Expr) -> AExpr {
        match e {
            Expr::Compare(op, a, b) => AExpr::Compare(*op, Box::new(self.expr(a)), Box::new(self.expr(b))),
            Expr::And(a, b) => AExpr::And(Box::new(self.expr(a)), Box::new(self.expr(b))),
            Expr::Or(a, b) => AExpr::Or(Box::new(self.expr(a)), Box::new(self.expr(b))),
            Expr::Not(a) => AExpr::Not(Box::new(self.expr(a))),
            Expr::In { expr, list, negated } => {
                AExpr::In(Box::new(self.expr(expr)), list.iter().map(|x| self.expr(x)).collect(), *negated)
            }
            Expr::FnCall { name, args } => {
                let name = match name {
                    FnName::Builtin(b) => b.clone(),
                    FnName::Iri(t) => self.iri_token(t),
                };
                AExpr::Call(name, args.iter().map(|x| self.expr(x)).collect())
            }
            Expr::Arith(op, a, b) => {
                let sym = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                };
                AExpr::Arith(sym, Box::new(self.expr(a)), Box::new(self.expr(b)))
            }
            Expr::TermRef(t) => AExpr::Node(self.term(t)),
            Expr::Paren(inner) => self.expr(inner),
        }
    }

    fn conjuncts(&mut self, e: &Expr, out: &mut Vec<AExpr>) {
        match e {
            Expr::And(a, b) => {
                self.conjuncts(a, out);
                self.conjuncts(b, out);
            }
            Expr::Paren(inner) => self.conjuncts(inner, out),
            other => out.push(self.expr(other)),
        }
    }

    fn group(&mut self, p: &GraphPattern) {
        let children: &[GraphPattern] = match p {
            GraphPattern::Group(c) => c,
            other => std::slice::from_ref(other),
        };
        self.segs.push(Seg::Lit("{"));
        let mut triples = Vec::new();
        for c in children {
            if let GraphPattern::Bgp(ts) = c {
                for t in ts {
                    let s = self.node(&t.subject, &mut triples);
                    self.props(&s, &t.properties, &mut triples);
                }
            }
        }
        if !triples.is_empty() {
            self.segs.push(Seg::Set(triples));
        }
        let mut filters = Vec::new();
        for c in children {
            match c {
                GraphPattern::Bgp(_) => {}
                GraphPattern::Filter(e) => self.conjuncts(e, &mut filters),
                GraphPattern::Group(_) => self.group(c),
                GraphPattern::Union(..) => self.union(c),
                GraphPattern::NotExists(inner) => {
                    self.segs.push(Seg::Lit("FILTER NOT EXISTS"));
                    self.group(inner);
                }
                GraphPattern::Bind(e, v) => {
                    let e = self.expr(e);
                    let v = self.term(v);
                    self.items.push(Item::Bind(e, v));
                    self.segs.push(Seg::One(self.items.len() - 1));
                }
            }
        }
        if !filters.is_empty() {
            let ids = filters
                .into_iter()
                .map(|f| {
                    self.items.push(Item::Filter(f));
                    self.items.len() - 1
                })
                .collect();
            self.segs.push(Seg::Set(ids));
        }
        self.segs.push(Seg::Lit("}"));
    }

    fn union(&mut self, p: &GraphPattern) {
        match p {
            GraphPattern::Union(a, b) => {
                self.union(a);
                self.segs.push(Seg::Lit("UNION"));
                self.group(b);
            }
            other => self.group(other),
        }
    }
}

impl Program {
    fn build(ast: &QueryAst) -> Program {
        let mut b = Builder {
            ast,
            items: Vec::new(),
            segs: Vec::new(),
            vars: HashMap::new(),
            labels: HashMap::new(),
            next_var: 0,
            next_blank: 0,
        };
        b.group(&ast.where_clause);
        let mut occurrences = HashMap::new();
        for item in &b.items {
            item_nodes(item, &mut |n| {
                if !matches!(n, NodeRef::Const(_)) {
                    *occurrences.entry(n.clone()).or_insert(0) += 1;
                }
            });
        }
        Program { items: b.items, segs: b.segs, occurrences }
    }

    fn canonical(&self) -> Result<String, SignatureError> {
        let mut search = Search { prog: self, best: None, leaves: 0, exhausted: false };
        let mut out = Vec::new();
        search.run(0, Vec::new(), Naming::default(), &mut out);
        if search.exhausted {
            return Err(SignatureError::SearchLimit(LEAF_CAP));
        }
        let best = search.best.unwrap_or_default();
        Ok(best.iter().flatten().map(Atom::to_string).collect::<Vec<_>>().join(" "))
    }

    /// True when every unnamed node of `item` occurs in no other item.
    fn isolated(&self, item: usize, naming: &Naming) -> bool {
        let mut local: HashMap<&NodeRef, usize> = HashMap::new();
        item_nodes_ref(&self.items[item], &mut |n| {
            if !matches!(n, NodeRef::Const(_)) && naming.get(n).is_none() {
                *local.entry(n).or_insert(0) += 1;
            }
        });
        local.iter().all(|(n, c)| self.occurrences.get(*n) == Some(c))
    }
}

fn item_nodes(item: &Item, f: &mut dyn FnMut(&NodeRef)) {
    item_nodes_ref(item, f)
}

fn item_nodes_ref<'a>(item: &'a Item, f: &mut dyn FnMut(&'a NodeRef)) {
    fn expr<'a>(e: &'a AExpr, f: &mut dyn FnMut(&'a NodeRef)) {
        match e {
            AExpr::Compare(_, a, b) | AExpr::And(a, b) | AExpr::Or(a, b) | AExpr::Arith(_, a, b) => {
                expr(a, f);
                expr(b, f);
            }
            AExpr::Not(a) => expr(a, f),
            AExpr::In(a, list, _) => {
                expr(a, f);
                list.iter().for_each(|x| expr(x, f));
            }
            AExpr::Call(_, args) => args.iter().for_each(|x| expr(x, f)),
            AExpr::Node(n) => f(n),
        }
    }
    match item {
        Item::Triple(t) => t.iter().for_each(f),
        Item::Filter(e) => expr(e, f),
        Item::Bind(e, v) => {
            expr(e, f);
            f(v);
        }
    }
}

// ---------------------------------------------------------------------------
// Search

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    S(String),
    V(u32),
    B(u32),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::S(s) => f.write_str(s),
            Atom::V(n) => write!(f, "?v{n}"),
            Atom::B(n) => write!(f, "_:b{n}"),
        }
    }
}

fn s(text: &str) -> Atom {
    Atom::S(text.to_string())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Naming {
    vars: HashMap<u32, u32>,
    blanks: HashMap<u32, u32>,
}

impl Naming {
    fn get(&self, n: &NodeRef) -> Option<u32> {
        match n {
            NodeRef::Var(v) => self.vars.get(v).copied(),
            NodeRef::Blank(b) => self.blanks.get(b).copied(),
            NodeRef::Const(_) => None,
        }
    }

    fn atom(&mut self, n: &NodeRef) -> Atom {
        match n {
            NodeRef::Const(c) => Atom::S(c.clone()),
            NodeRef::Var(v) => {
                let next = self.vars.len() as u32 + 1;
                Atom::V(*self.vars.entry(*v).or_insert(next))
            }
            NodeRef::Blank(b) => {
                let next = self.blanks.len() as u32 + 1;
                Atom::B(*self.blanks.entry(*b).or_insert(next))
            }
        }
    }

    /// Every minimal rendering of `item` over the operand orders of its
    /// symmetric comparisons, one per distinct resulting naming.
    fn render_all(&self, item: &Item) -> Vec<(Vec<Atom>, Naming)> {
        let k = symmetric_compares(item).min(MAX_FLIP_BITS);
        let mut best: Vec<(Vec<Atom>, Naming)> = Vec::new();
        for mask in 0..(1u32 << k) {
            let mut n = self.clone();
            let r = n.render(item, &mut Flips { mask, next: 0 });
            match best.first() {
                Some((b, _)) if r > *b => {}
                Some((b, _)) if r == *b => {
                    if !best.iter().any(|(_, m)| *m == n) {
                        best.push((r, n));
                    }
                }
                _ => best = vec![(r, n)],
            }
        }
        best
    }

    fn render(&mut self, item: &Item, flips: &mut Flips) -> Vec<Atom> {
        match item {
            Item::Triple(t) => {
                let mut out: Vec<Atom> = t.iter().map(|n| self.atom(n)).collect();
                out.push(s("."));
                out
            }
            Item::Filter(e) => {
                let mut out = vec![s("FILTER"), s("(")];
                out.extend(self.expr(e, flips));
                out.push(s(")"));
                out
            }
            Item::Bind(e, v) => {
                let mut out = vec![s("BIND"), s("(")];
                out.extend(self.expr(e, flips));
                out.push(s("AS"));
                out.push(self.atom(v));
                out.push(s(")"));
                out
            }
        }
    }

    fn expr(&mut self, e: &AExpr, flips: &mut Flips) -> Vec<Atom> {
        match e {
            AExpr::Compare(op, a, b) => {
                let (a, b) = if op.is_symmetric() && flips.take() { (b, a) } else { (a, b) };
                let mut out = self.expr(a, flips);
                out.push(s(op.symbol()));
                out.extend(self.expr(b, flips));
                out
            }
            AExpr::And(a, b) | AExpr::Or(a, b) => {
                let sym = if matches!(e, AExpr::And(..)) { "&&" } else { "||" };
                let mut out = vec![s("(")];
                out.extend(self.expr(a, flips));
                out.push(s(sym));
                out.extend(self.expr(b, flips));
                out.push(s(")"));
                out
            }
            AExpr::Arith(sym, a, b) => {
                let mut out = vec![s("(")];
                out.extend(self.expr(a, flips));
                out.push(s(sym));
                out.extend(self.expr(b, flips));
                out.push(s(")"));
                out
            }
            AExpr::Not(a) => {
                let mut out = vec![s("!")];
                out.extend(self.expr(a, flips));
                out
            }
            AExpr::In(a, list, negated) => {
                let mut out = self.expr(a, flips);
                out.push(s(if *negated { "NOT IN" } else { "IN" }));
                out.push(s("("));
                for (i, x) in list.iter().enumerate() {
                    if i > 0 {
                        out.push(s(","));
                    }
                    out.extend(self.expr(x, flips));
                }
                out.push(s(")"));
                out
            }
            AExpr::Call(name, args) => {
                let mut out = vec![Atom::S(name.clone()), s("(")];
                for (i, x) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(s(","));
                    }
                    out.extend(self.expr(x, flips));
                }
                out.push(s(")"));
                out
            }
            AExpr::Node(n) => vec![self.atom(n)],
        }
    }
}

/// Operand-order choices for symmetric comparisons, one bit each in
/// visiting order.
struct Flips {
    mask: u32,
    next: u32,
}

impl Flips {
    fn take(&mut self) -> bool {
        let bit = self.next < MAX_FLIP_BITS as u32 && self.mask & (1 << self.next) != 0;
        self.next += 1;
        bit
    }
}

const MAX_FLIP_BITS: usize = 12;

fn symmetric_compares(item: &Item) -> usize {
    fn count(e: &AExpr) -> usize {
        match e {
            AExpr::Compare(op, a, b) => usize::from(op.is_symmetric()) + count(a) + count(b),
            AExpr::And(a, b) | AExpr::Or(a, b) | AExpr::Arith(_, a, b) => count(a) + count(b),
            AExpr::Not(a) => count(a),
            AExpr::In(a, list, _) => count(a) + list.iter().map(count).sum::<usize>(),
            AExpr::Call(_, args) => args.iter().map(count).sum(),
            AExpr::Node(_) => 0,
        }
    }
    match item {
        Item::Triple(_) => 0,
        Item::Filter(e) | Item::Bind(e, _) => count(e),
    }
}

struct Search<'p> {
    prog: &'p Program,
    best: Option<Vec<Vec<Atom>>>,
    leaves: usize,
    exhausted: bool,
}

impl Search<'_> {
    /// Whether the partial rendering can still reach (or beat) the best
    /// complete rendering found so far.
    fn admit(&self, out: &[Vec<Atom>]) -> bool {
        match &self.best {
            Some(best) => out[..] <= best[..out.len()],
            None => true,
        }
    }

    fn run(&mut self, pos: usize, pending: Vec<usize>, naming: Naming, out: &mut Vec<Vec<Atom>>) {
        if self.exhausted {
            return;
        }
        if !pending.is_empty() {
            let mut rendered: Vec<(usize, Vec<Atom>, Naming)> = pending
                .iter()
                .flat_map(|&i| naming.render_all(&self.prog.items[i]).into_iter().map(move |(r, n)| (i, r, n)))
                .collect();
            let min = rendered.iter().map(|(_, r, _)| r).min().unwrap().clone();
            rendered.retain(|(_, r, _)| *r == min);
            let mut seen_isolated = false;
            for (i, r, n) in rendered {
                if self.prog.isolated(i, &naming) {
                    if seen_isolated {
                        continue;
                    }
                    seen_isolated = true;
                }
                out.push(r);
                if self.admit(out) {
                    let rest: Vec<usize> = pending.iter().copied().filter(|&j| j != i).collect();
                    self.run(pos, rest, n, out);
                }
                out.pop();
            }
            return;
        }
        if pos == self.prog.segs.len() {
            self.leaves += 1;
            if self.leaves > LEAF_CAP {
                self.exhausted = true;
                return;
            }
            if self.best.as_ref().is_none_or(|b| out[..] < b[..]) {
                self.best = Some(out.clone());
            }
            return;
        }
        match &self.prog.segs[pos] {
            Seg::Lit(text) => {
                out.push(vec![s(text)]);
                self.run(pos + 1, Vec::new(), naming, out);
                out.pop();
            }
            Seg::One(i) => {
                for (r, n) in naming.render_all(&self.prog.items[*i]) {
                    out.push(r);
                    if self.admit(out) {
                        self.run(pos + 1, Vec::new(), n, out);
                    }
                    out.pop();
                }
            }
            Seg::Set(items) => self.run(pos + 1, items.clone(), naming, out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::PrefixTable;

    fn sig(q: &str) -> Signature {
        let prefixes = vocab::builtin_ontology_prefixes("SWO").unwrap();
        canonicalize(&parse_query(q, &prefixes).unwrap()).unwrap()
    }

    #[test]
    fn domain_iris_are_abstracted() {
        let a = sig("SELECT DISTINCT ?eats WHERE { ?eats rdfs:subClassOf awo:plant, [ a owl:Restriction ; owl:onProperty awo:eats; owl:someValuesFrom awo:animal ] . FILTER(?eats != owl:Nothing) }");
        let b = sig("SELECT DISTINCT ?x WHERE { ?x rdfs:subClassOf stuff:Stuff, [ a owl:Restriction ; owl:someValuesFrom <http://e/y> ; owl:onProperty swo:p ] . FILTER(owl:Nothing != ?x) }");
        assert_eq!(a, b);
        assert!(!a.skeleton.contains("awo"));
        assert!(a.skeleton.contains("owl:someValuesFrom :URI"));
        assert!(a.skeleton.contains("rdf:type owl:Restriction"));
    }

    #[test]
    fn mn_listing_skeleton() {
        let q = "SELECT * WHERE { ?x rdfs:subClassOf _:b2, [ owl:onProperty _:b3 ; owl:someValuesFrom ?w ] .
            ?y rdfs:subClassOf _:b2, [ owl:onProperty _:b3 ; owl:someValuesFrom ?w ] .
            ?w rdfs:subClassOf ?z FILTER ( ?w != ?z && ?x != ?y) }";
        let a = sig(q);
        let b = sig("SELECT * WHERE { ?b rdfs:subClassOf _:k, [ owl:someValuesFrom ?c ; owl:onProperty _:m ] .
            ?c rdfs:subClassOf ?d . ?a rdfs:subClassOf [ owl:onProperty _:m ; owl:someValuesFrom ?c ], _:k
            FILTER ( ?b != ?a ) FILTER(?d != ?c) }");
        assert_eq!(a, b);
        assert_eq!(a.skeleton.matches(" . ").count(), 9);
    }

    #[test]
    fn sensitive_to_verb_distinct_and_restriction_kind() {
        let base = "WHERE { ?x rdfs:subClassOf [ owl:onProperty :p ; owl:someValuesFrom :c ] }";
        let s1 = sig(&format!("SELECT * {base}"));
        let s2 = sig(&format!("SELECT DISTINCT * {base}"));
        let s3 = sig(&base.replace("WHERE", "ASK"));
        let s4 = sig(&format!("SELECT * {}", base.replace("someValuesFrom", "allValuesFrom")));
        let s5 = sig(&format!("SELECT * {}", base.replace("owl:someValuesFrom :c", "owl:hasValue :c")));
        let all = [s1, s2, s3, s4, s5];
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert_ne!(all[i], all[j], "{i} vs {j}");
            }
        }
    }

    #[test]
    fn placeholders_and_literals() {
        let a = sig("ASK { $sw rdfs:subClassOf [ owl:onProperty :p ; owl:cardinality \"2\"^^xsd:nonNegativeInteger ] }");
        assert!(a.skeleton.contains(":LIT^^xsd:nonNegativeInteger"), "{}", a.skeleton);
        assert!(a.skeleton.starts_with("{ :URI rdfs:subClassOf _:b1 ."), "{}", a.skeleton);
    }

    #[test]
    fn collections_and_paths() {
        let a = sig("SELECT ?c WHERE { ?x owl:unionOf ( :a :b ) . ?x owl:intersectionOf/rdf:rest*/rdf:first ?c }");
        assert!(a.skeleton.contains("owl:intersectionOf/rdf:rest*/rdf:first"));
        assert_eq!(a.skeleton.matches("rdf:first").count(), 3);
        assert!(a.skeleton.contains("rdf:rest rdf:nil"));
    }

    #[test]
    fn symmetric_blank_structures_are_stable() {
        let q = "SELECT * WHERE { ?x rdfs:subClassOf [ owl:onProperty :p ; owl:someValuesFrom :c ], [ owl:onProperty :p ; owl:someValuesFrom :c ], [ owl:onProperty :p ; owl:someValuesFrom :c ] }";
        let a = sig(q);
        assert_eq!(a, sig(q));
        assert_eq!(a.skeleton.matches("_:b3").count(), 3);
    }

    #[test]
    fn guard_rejects_large_queries() {
        let q = parse_query("ASK { ?a :p ?b . ?b :p ?c . ?c :p ?d . ?d :p ?e . ?e :p ?f }", &PrefixTable::new()).unwrap();
        let err = canonicalize_with(&q, CanonOptions { max_triples: 4 }).unwrap_err();
        assert_eq!(err, SignatureError::TooManyTriples { triples: 5, max: 4 });
    }

    #[test]
    fn grouping_orders_and_covers() {
        let p = PrefixTable::new();
        let q1 = parse_query("ASK { :a rdfs:subClassOf :b }", &p).unwrap();
        let q2 = parse_query("ASK { :c rdfs:subClassOf :d }", &p).unwrap();
        let q3 = parse_query("SELECT * { ?x rdfs:subClassOf :d }", &p).unwrap();
        let g = group_by_signature([("1", &q3), ("2", &q1), ("3", &q2)], CanonOptions::default());
        assert_eq!(g.groups.len(), 2);
        assert_eq!(g.groups[0].members, vec!["2", "3"]);
        assert_eq!(g.total, 3);
        assert!((g.top_coverage(1) - 66.666).abs() < 0.01);
        assert_eq!(g.top_coverage(9), 100.0);
        assert_eq!(g.group_of("1").unwrap().id, "S2");
    }

    #[test]
    fn single_query_grouping() {
        let q = parse_query("ASK WHERE { }", &PrefixTable::new()).unwrap();
        let g = group_by_signature([("only", &q)], CanonOptions::default());
        assert_eq!(g.groups.len(), 1);
        assert_eq!(g.groups[0].cumulative_coverage, 100.0);
        assert_eq!(g.groups[0].signature.skeleton, "{ }");
    }
}
