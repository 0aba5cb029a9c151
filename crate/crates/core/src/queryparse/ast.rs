//! Syntax tree for the SPARQL-OWL query subset.
//!
//! The tree keeps the source structure: predicate-object lists, object
//! lists, nested blank-node property lists and collections are not flattened
//! into plain triples here (see [`crate::signatures`] for that).

use crate::vocab::{self, PrefixTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarMarker {
    /// `?name`
    Question,
    /// `$name`, used for CQ placeholders.
    Placeholder,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(String),
    PrefixedName { prefix: String, local: String },
    BlankNodeLabel(String),
    /// `[]`, numbered in parse order.
    AnonBlank(u32),
    Variable { name: String, marker: VarMarker },
    Literal {
        lexical: String,
        datatype: Option<Box<Term>>,
        language: Option<String>,
    },
    /// The Turtle `a` keyword.
    A,
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Variable { name: name.to_string(), marker: VarMarker::Question }
    }

    pub fn placeholder(name: &str) -> Self {
        Term::Variable { name: name.to_string(), marker: VarMarker::Placeholder }
    }

    pub fn pname(prefix: &str, local: &str) -> Self {
        Term::PrefixedName { prefix: prefix.to_string(), local: local.to_string() }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    /// Resolves IRIs, prefixed names and `a` to an absolute IRI. Returns
    /// `Ok(None)` for terms that are not IRIs, `Err(prefix)` when the prefix
    /// is not declared.
    pub fn resolve(&self, prefixes: &PrefixTable) -> Result<Option<String>, String> {
        match self {
            Term::Iri(iri) => Ok(Some(iri.clone())),
            Term::A => Ok(Some(vocab::RDF_TYPE.to_string())),
            Term::PrefixedName { prefix, local } => match prefixes.get(prefix) {
                Some(ns) => Ok(Some(format!("{ns}{local}"))),
                None => Err(prefix.clone()),
            },
            _ => Ok(None),
        }
    }
}

/// Subject or object position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Term(Term),
    /// `[ p o ; ... ]`
    BlankPropertyList(Vec<PropertyObjects>),
    /// `( o1 o2 ... )`, object position only.
    Collection(Vec<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropertyPath {
    Atom(Term),
    Sequence(Vec<PropertyPath>),
    ZeroOrMore(Box<PropertyPath>),
}

impl PropertyPath {
    pub fn as_atom(&self) -> Option<&Term> {
        match self {
            PropertyPath::Atom(t) => Some(t),
            _ => None,
        }
    }
}

/// One predicate with its comma-separated objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PropertyObjects {
    pub predicate: PropertyPath,
    pub objects: Vec<Node>,
}

/// A subject with its `;`-separated predicate-object list. A lone blank-node
/// property list (`[ ... ] .`) has an empty `properties`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: Node,
    pub properties: Vec<PropertyObjects>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Gt => ">",
            CompareOp::Le => "<=",
            CompareOp::Ge => ">=",
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, CompareOp::Eq | CompareOp::Ne)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FnName {
    /// Built-in function, stored upper-case (`STRSTARTS`, `NOW`, ...).
    Builtin(String),
    /// IRI-named function such as the `xsd:dateTime` cast.
    Iri(Term),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Compare(CompareOp, Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    In { expr: Box<Expr>, list: Vec<Expr>, negated: bool },
    FnCall { name: FnName, args: Vec<Expr> },
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    TermRef(Term),
    Paren(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphPattern {
    Bgp(Vec<TriplePattern>),
    Group(Vec<GraphPattern>),
    Filter(Expr),
    Union(Box<GraphPattern>, Box<GraphPattern>),
    /// `FILTER NOT EXISTS { ... }`; the inner pattern is always a `Group`.
    NotExists(Box<GraphPattern>),
    /// `BIND(expr AS ?var)`; the term is always a variable.
    Bind(Expr, Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum QueryVerb {
    Select,
    Ask,
}

impl QueryVerb {
    pub fn keyword(self) -> &'static str {
        match self {
            QueryVerb::Select => "SELECT",
            QueryVerb::Ask => "ASK",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Projection {
    Star,
    Vars(Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAst {
    pub verb: QueryVerb,
    pub distinct: bool,
    /// `None` for ASK queries.
    pub projection: Option<Projection>,
    /// Always a `GraphPattern::Group`.
    pub where_clause: GraphPattern,
    /// Declared `PREFIX`es merged over the injected table.
    pub prefix_table: PrefixTable,
    /// Prefixes declared in the query text itself, in source order.
    pub declared_prefixes: Vec<(String, String)>,
}

impl QueryAst {
    pub fn resolve(&self, term: &Term) -> Result<Option<String>, String> {
        term.resolve(&self.prefix_table)
    }

    /// Visits every term in the query: triples, paths, collections and
    /// expressions.
    pub fn for_each_term(&self, f: &mut dyn FnMut(&Term)) {
        if let Some(Projection::Vars(vars)) = &self.projection {
            vars.iter().for_each(&mut *f);
        }
        visit_pattern(&self.where_clause, f);
    }

    /// Visits every graph pattern node, pre-order.
    pub fn for_each_pattern(&self, f: &mut dyn FnMut(&GraphPattern)) {
        walk_patterns(&self.where_clause, f);
    }

    /// Number of plain triples after expanding lists, blank-node property
    /// lists and collections.
    pub fn flat_triple_count(&self) -> usize {
        let mut n = 0;
        self.for_each_pattern(&mut |p| {
            if let GraphPattern::Bgp(triples) = p {
                n += triples.iter().map(count_triples).sum::<usize>();
            }
        });
        n
    }
}

fn walk_patterns(p: &GraphPattern, f: &mut dyn FnMut(&GraphPattern)) {
    f(p);
    match p {
        GraphPattern::Group(children) => children.iter().for_each(|c| walk_patterns(c, f)),
        GraphPattern::Union(a, b) => {
            walk_patterns(a, f);
            walk_patterns(b, f);
        }
        GraphPattern::NotExists(inner) => walk_patterns(inner, f),
        _ => {}
    }
}

fn count_triples(t: &TriplePattern) -> usize {
    count_node(&t.subject) + count_props(&t.properties)
}

fn count_props(props: &[PropertyObjects]) -> usize {
    props
        .iter()
        .map(|po| po.objects.iter().map(|o| 1 + count_node(o)).sum::<usize>())
        .sum()
}

fn count_node(n: &Node) -> usize {
    match n {
        Node::Term(_) => 0,
        Node::BlankPropertyList(props) => count_props(props),
        // rdf:first + rdf:rest per item
        Node::Collection(items) => items.iter().map(|i| 2 + count_node(i)).sum(),
    }
}

fn visit_pattern(p: &GraphPattern, f: &mut dyn FnMut(&Term)) {
    match p {
        GraphPattern::Bgp(triples) => {
            for t in triples {
                visit_node(&t.subject, f);
                visit_props(&t.properties, f);
            }
        }
        GraphPattern::Group(children) => children.iter().for_each(|c| visit_pattern(c, f)),
        GraphPattern::Filter(e) => visit_expr(e, f),
        GraphPattern::Union(a, b) => {
            visit_pattern(a, f);
            visit_pattern(b, f);
        }
        GraphPattern::NotExists(inner) => visit_pattern(inner, f),
        GraphPattern::Bind(e, v) => {
            visit_expr(e, f);
            f(v);
        }
    }
}

fn visit_props(props: &[PropertyObjects], f: &mut dyn FnMut(&Term)) {
    for po in props {
        visit_path(&po.predicate, f);
        po.objects.iter().for_each(|o| visit_node(o, f));
    }
}

fn visit_path(p: &PropertyPath, f: &mut dyn FnMut(&Term)) {
    match p {
        PropertyPath::Atom(t) => f(t),
        PropertyPath::Sequence(parts) => parts.iter().for_each(|q| visit_path(q, f)),
        PropertyPath::ZeroOrMore(inner) => visit_path(inner, f),
    }
}

fn visit_node(n: &Node, f: &mut dyn FnMut(&Term)) {
    match n {
        Node::Term(t) => visit_term(t, f),
        Node::BlankPropertyList(props) => visit_props(props, f),
        Node::Collection(items) => items.iter().for_each(|i| visit_node(i, f)),
    }
}

fn visit_term(t: &Term, f: &mut dyn FnMut(&Term)) {
    f(t);
    if let Term::Literal { datatype: Some(dt), .. } = t {
        f(dt);
    }
}

pub(crate) fn visit_expr(e: &Expr, f: &mut dyn FnMut(&Term)) {
    match e {
        Expr::Compare(_, a, b) | Expr::And(a, b) | Expr::Or(a, b) | Expr::Arith(_, a, b) => {
            visit_expr(a, f);
            visit_expr(b, f);
        }
        Expr::Not(a) | Expr::Paren(a) => visit_expr(a, f),
        Expr::In { expr, list, .. } => {
            visit_expr(expr, f);
            list.iter().for_each(|x| visit_expr(x, f));
        }
        Expr::FnCall { name, args } => {
            if let FnName::Iri(t) = name {
                f(t);
            }
            args.iter().for_each(|x| visit_expr(x, f));
        }
        Expr::TermRef(t) => visit_term(t, f),
    }
}
