use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{tokenize, Spanned, Tok};
use super::{ParseError, Position};
use crate::vocab::{self, PrefixTable};

const BUILTINS: [&str; 17] = [
    "STRSTARTS", "STRENDS", "CONTAINS", "NOW", "STR", "LANG", "DATATYPE", "BOUND", "ISIRI", "ISURI",
    "ISBLANK", "ISLITERAL", "REGEX", "LCASE", "UCASE", "STRLEN", "SAMETERM",
];

const UNSUPPORTED: [&str; 14] = [
    "OPTIONAL", "MINUS", "GRAPH", "SERVICE", "VALUES", "CONSTRUCT", "DESCRIBE", "ORDER", "GROUP",
    "LIMIT", "OFFSET", "HAVING", "FROM", "BASE",
];

pub(super) fn parse(text: &str, injected: &PrefixTable) -> Result<QueryAst, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let toks = tokenize(text)?;
    let end = Position::end_of(text);
    let mut p = Parser { toks, i: 0, end, next_anon: 0 };
    p.query(injected)
}

struct Parser {
    toks: Vec<Spanned>,
    i: usize,
    end: Position,
    next_anon: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.i + n).map(|t| &t.tok)
    }

    fn pos(&self) -> Position {
        self.toks.get(self.i).map(|t| t.pos).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|t| t.tok.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expected(&self, expected: &[&str]) -> ParseError {
        let expected = expected.iter().map(|s| s.to_string()).collect();
        match self.toks.get(self.i) {
            Some(t) => ParseError::Grammar { pos: t.pos, found: t.tok.describe(), expected },
            None => ParseError::UnexpectedEnd { pos: self.end, expected },
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x.eq_ignore_ascii_case(w))
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &'static str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.expected(&[p]))
        }
    }

    fn reject_unsupported(&self) -> Result<(), ParseError> {
        if let Some(Tok::Word(w)) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED.contains(&upper.as_str()) {
                return Err(ParseError::Unsupported { pos: self.pos(), construct: upper });
            }
        }
        Ok(())
    }

    fn query(&mut self, injected: &PrefixTable) -> Result<QueryAst, ParseError> {
        let mut prefix_table = vocab::standard_prefixes();
        prefix_table.extend(injected.iter().map(|(k, v)| (k.clone(), v.clone())));
        let mut declared = Vec::new();
        while self.eat_word("PREFIX") {
            let label = match self.next() {
                Some(Tok::PName { prefix, local }) if local.is_empty() => prefix,
                _ => {
                    self.i = self.i.saturating_sub(1);
                    return Err(self.expected(&["prefix label"]));
                }
            };
            let iri = match self.next() {
                Some(Tok::IriRef(iri)) => iri,
                _ => {
                    self.i = self.i.saturating_sub(1);
                    return Err(self.expected(&["IRI"]));
                }
            };
            prefix_table.insert(label.clone(), iri.clone());
            declared.push((label, iri));
        }
        self.reject_unsupported()?;

        let (verb, distinct, projection) = if self.eat_word("SELECT") {
            let distinct = self.eat_word("DISTINCT");
            if !distinct && self.is_word("REDUCED") {
                return Err(ParseError::Unsupported { pos: self.pos(), construct: "REDUCED".into() });
            }
            let projection = if self.eat_punct("*") {
                Projection::Star
            } else {
                let mut vars = Vec::new();
                while let Some(Tok::Var { .. }) = self.peek() {
                    vars.push(self.var_term()?);
                }
                if vars.is_empty() {
                    return Err(self.expected(&["*", "variable"]));
                }
                Projection::Vars(vars)
            };
            (QueryVerb::Select, distinct, Some(projection))
        } else if self.eat_word("ASK") {
            (QueryVerb::Ask, false, None)
        } else {
            return Err(self.expected(&["SELECT", "ASK"]));
        };
        self.reject_unsupported()?;
        self.eat_word("WHERE");
        if !self.is_punct("{") {
            return Err(self.expected(&["WHERE", "{"]));
        }
        let where_clause = self.group()?;
        if self.peek().is_some() {
            self.reject_unsupported()?;
            return Err(self.expected(&["end of query"]));
        }
        let ast = QueryAst {
            verb,
            distinct,
            projection,
            where_clause,
            prefix_table,
            declared_prefixes: declared,
        };
        check_projection(&ast)?;
        Ok(ast)
    }

    fn var_term(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Some(Tok::Var { name, marker }) => Ok(Term::Variable { name, marker }),
            _ => {
                self.i = self.i.saturating_sub(1);
                Err(self.expected(&["variable"]))
            }
        }
    }

    fn group(&mut self) -> Result<GraphPattern, ParseError> {
        self.expect_punct("{")?;
        let mut children = Vec::new();
        let mut bgp: Vec<TriplePattern> = Vec::new();
        loop {
            self.reject_unsupported()?;
            if self.eat_punct("}") {
                break;
            }
            if self.peek().is_none() {
                return Err(self.expected(&["}"]));
            }
            if self.is_word("FILTER") || self.is_word("BIND") || self.is_punct("{") {
                if !bgp.is_empty() {
                    children.push(GraphPattern::Bgp(std::mem::take(&mut bgp)));
                }
                let child = if self.eat_word("FILTER") {
                    self.filter()?
                } else if self.eat_word("BIND") {
                    self.bind()?
                } else {
                    self.group_or_union()?
                };
                children.push(child);
                self.eat_punct(".");
                continue;
            }
            if self.starts_triple() {
                bgp.push(self.triples_same_subject()?);
                self.reject_unsupported()?;
                if !self.eat_punct(".") && !self.is_punct("}") && !self.is_word("FILTER")
                    && !self.is_word("BIND") && !self.is_punct("{")
                {
                    return Err(self.expected(&[".", "}"]));
                }
                continue;
            }
            return Err(self.expected(&["triple pattern", "FILTER", "BIND", "{", "}"]));
        }
        if !bgp.is_empty() || children.is_empty() {
            children.push(GraphPattern::Bgp(bgp));
        }
        Ok(GraphPattern::Group(children))
    }

    fn group_or_union(&mut self) -> Result<GraphPattern, ParseError> {
        let mut left = self.group()?;
        while self.eat_word("UNION") {
            let right = self.group()?;
            left = GraphPattern::Union(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn filter(&mut self) -> Result<GraphPattern, ParseError> {
        if self.is_word("NOT") && matches!(self.peek_at(1), Some(Tok::Word(w)) if w.eq_ignore_ascii_case("EXISTS")) {
            self.i += 2;
            return Ok(GraphPattern::NotExists(Box::new(self.group()?)));
        }
        if self.is_word("EXISTS") {
            return Err(ParseError::Unsupported { pos: self.pos(), construct: "EXISTS".into() });
        }
        if self.eat_punct("(") {
            let e = self.expr()?;
            self.expect_punct(")")?;
            return Ok(GraphPattern::Filter(e));
        }
        match self.peek() {
            Some(Tok::Word(_)) | Some(Tok::PName { .. }) | Some(Tok::IriRef(_)) => {
                Ok(GraphPattern::Filter(self.primary()?))
            }
            _ => Err(self.expected(&["(", "NOT EXISTS", "function call"])),
        }
    }

    fn bind(&mut self) -> Result<GraphPattern, ParseError> {
        self.expect_punct("(")?;
        let e = self.expr()?;
        if !self.eat_word("AS") {
            return Err(self.expected(&["AS"]));
        }
        let v = self.var_term()?;
        self.expect_punct(")")?;
        Ok(GraphPattern::Bind(e, v))
    }

    fn starts_triple(&self) -> bool {
        match self.peek() {
            Some(Tok::IriRef(_) | Tok::PName { .. } | Tok::Var { .. } | Tok::BlankLabel(_) | Tok::Str(_) | Tok::Number(_)) => true,
            Some(Tok::Punct("[")) | Some(Tok::Punct("(")) => true,
            Some(Tok::Word(w)) => w == "true" || w == "false",
            _ => false,
        }
    }

    fn triples_same_subject(&mut self) -> Result<TriplePattern, ParseError> {
        if self.is_punct("(") {
            return Err(ParseError::Unsupported { pos: self.pos(), construct: "collection in subject position".into() });
        }
        if self.is_punct("[") && !matches!(self.peek_at(1), Some(Tok::Punct("]"))) {
            let subject = self.graph_node()?;
            let properties = if self.starts_verb() { self.property_list()? } else { Vec::new() };
            return Ok(TriplePattern { subject, properties });
        }
        let subject = self.graph_node()?;
        if !self.starts_verb() {
            return Err(self.expected(&["predicate"]));
        }
        let properties = self.property_list()?;
        Ok(TriplePattern { subject, properties })
    }

    fn starts_verb(&self) -> bool {
        match self.peek() {
            Some(Tok::IriRef(_) | Tok::PName { .. } | Tok::Var { .. }) => true,
            Some(Tok::Word(w)) => w == "a",
            Some(Tok::Punct("(")) => true,
            _ => false,
        }
    }

    fn property_list(&mut self) -> Result<Vec<PropertyObjects>, ParseError> {
        let mut out = Vec::new();
        loop {
            let predicate = self.verb()?;
            let mut objects = vec![self.graph_node()?];
            while self.eat_punct(",") {
                objects.push(self.graph_node()?);
            }
            out.push(PropertyObjects { predicate, objects });
            if !self.eat_punct(";") {
                break;
            }
            while self.eat_punct(";") {}
            if !self.starts_verb() {
                break;
            }
        }
        Ok(out)
    }

    fn verb(&mut self) -> Result<PropertyPath, ParseError> {
        if let Some(Tok::Var { .. }) = self.peek() {
            return Ok(PropertyPath::Atom(self.var_term()?));
        }
        let mut parts = vec![self.path_elt()?];
        while self.eat_punct("/") {
            parts.push(self.path_elt()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { PropertyPath::Sequence(parts) })
    }

    fn path_elt(&mut self) -> Result<PropertyPath, ParseError> {
        let primary = match self.peek() {
            Some(Tok::Word(w)) if w == "a" => {
                self.i += 1;
                PropertyPath::Atom(Term::A)
            }
            Some(Tok::IriRef(_) | Tok::PName { .. }) => PropertyPath::Atom(self.iri()?),
            Some(Tok::Punct("(")) => {
                return Err(ParseError::Unsupported { pos: self.pos(), construct: "grouped property path".into() })
            }
            Some(Tok::Punct(p)) if matches!(*p, "^" | "!") => {
                return Err(ParseError::Unsupported { pos: self.pos(), construct: format!("path operator '{p}'") })
            }
            _ => return Err(self.expected(&["predicate IRI", "a"])),
        };
        if self.eat_punct("*") {
            return Ok(PropertyPath::ZeroOrMore(Box::new(primary)));
        }
        if self.is_punct("+") || self.is_punct("|") {
            return Err(ParseError::Unsupported { pos: self.pos(), construct: "path operator".into() });
        }
        Ok(primary)
    }

    fn iri(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Some(Tok::IriRef(i)) => Ok(Term::Iri(i)),
            Some(Tok::PName { prefix, local }) => Ok(Term::PrefixedName { prefix, local }),
            _ => {
                self.i = self.i.saturating_sub(1);
                Err(self.expected(&["IRI"]))
            }
        }
    }

    fn graph_node(&mut self) -> Result<Node, ParseError> {
        if self.is_punct("[") {
            if matches!(self.peek_at(1), Some(Tok::Punct("]"))) {
                self.i += 2;
                let id = self.next_anon;
                self.next_anon += 1;
                return Ok(Node::Term(Term::AnonBlank(id)));
            }
            self.i += 1;
            let props = self.property_list()?;
            self.expect_punct("]")?;
            return Ok(Node::BlankPropertyList(props));
        }
        if self.eat_punct("(") {
            let mut items = Vec::new();
            while !self.eat_punct(")") {
                if self.peek().is_none() {
                    return Err(self.expected(&[")"]));
                }
                items.push(self.graph_node()?);
            }
            return Ok(Node::Collection(items));
        }
        Ok(Node::Term(self.term()?))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::IriRef(_) | Tok::PName { .. }) => self.iri(),
            Some(Tok::Var { name, marker }) => {
                self.i += 1;
                Ok(Term::Variable { name, marker })
            }
            Some(Tok::BlankLabel(l)) => {
                self.i += 1;
                Ok(Term::BlankNodeLabel(l))
            }
            Some(Tok::Str(s)) => {
                self.i += 1;
                if let Some(Tok::LangTag(tag)) = self.peek().cloned() {
                    self.i += 1;
                    return Ok(Term::Literal { lexical: s, datatype: None, language: Some(tag) });
                }
                if self.eat_punct("^^") {
                    let dt = self.iri()?;
                    return Ok(Term::Literal { lexical: s, datatype: Some(Box::new(dt)), language: None });
                }
                Ok(Term::Literal { lexical: s, datatype: None, language: None })
            }
            Some(Tok::Number(n)) => {
                self.i += 1;
                let dt = if n.contains(['e', 'E']) {
                    vocab::XSD_DOUBLE
                } else if n.contains('.') {
                    vocab::XSD_DECIMAL
                } else {
                    vocab::XSD_INTEGER
                };
                Ok(Term::Literal { lexical: n, datatype: Some(Box::new(Term::Iri(dt.into()))), language: None })
            }
            Some(Tok::Word(w)) if w == "true" || w == "false" => {
                self.i += 1;
                Ok(Term::Literal {
                    lexical: w,
                    datatype: Some(Box::new(Term::Iri(vocab::XSD_BOOLEAN.into()))),
                    language: None,
                })
            }
            _ => Err(self.expected(&["IRI", "variable", "blank node", "literal"])),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.and_expr()?;
        while self.eat_punct("||") {
            let right = self.and_expr()?;
            left = Expr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.rel_expr()?;
        while self.eat_punct("&&") {
            let right = self.rel_expr()?;
            left = Expr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn rel_expr(&mut self) -> Result<Expr, ParseError> {
        let left = self.add_expr()?;
        let op = match self.peek() {
            Some(Tok::Punct("=")) => Some(CompareOp::Eq),
            Some(Tok::Punct("!=")) => Some(CompareOp::Ne),
            Some(Tok::Punct("<")) => Some(CompareOp::Lt),
            Some(Tok::Punct(">")) => Some(CompareOp::Gt),
            Some(Tok::Punct("<=")) => Some(CompareOp::Le),
            Some(Tok::Punct(">=")) => Some(CompareOp::Ge),
            _ => None,
        };
        if let Some(op) = op {
            self.i += 1;
            let right = self.add_expr()?;
            return Ok(Expr::Compare(op, Box::new(left), Box::new(right)));
        }
        let negated = if self.is_word("NOT") && matches!(self.peek_at(1), Some(Tok::Word(w)) if w.eq_ignore_ascii_case("IN")) {
            self.i += 1;
            true
        } else {
            false
        };
        if self.eat_word("IN") {
            let list = self.arg_list()?;
            if list.is_empty() {
                return Err(ParseError::Grammar {
                    pos: self.pos(),
                    found: ")".into(),
                    expected: vec!["at least one IN list member".into()],
                });
            }
            return Ok(Expr::In { expr: Box::new(left), list, negated });
        }
        Ok(left)
    }

    fn add_expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.unary()?;
        loop {
            let op = if self.eat_punct("+") {
                ArithOp::Add
            } else if self.eat_punct("-") {
                ArithOp::Sub
            } else {
                break;
            };
            let right = self.unary()?;
            left = Expr::Arith(op, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_punct("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn arg_list(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if self.eat_punct(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_punct(")") {
                return Ok(args);
            }
            if !self.eat_punct(",") {
                return Err(self.expected(&[",", ")"]));
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_punct("(") {
            let e = self.expr()?;
            self.expect_punct(")")?;
            return Ok(Expr::Paren(Box::new(e)));
        }
        if let Some(Tok::Word(w)) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if BUILTINS.contains(&upper.as_str()) {
                self.i += 1;
                let args = self.arg_list()?;
                return Ok(Expr::FnCall { name: FnName::Builtin(upper), args });
            }
            if upper == "EXISTS" || upper == "NOT" {
                return Err(ParseError::Unsupported { pos: self.pos(), construct: "EXISTS in expression".into() });
            }
        }
        if matches!(self.peek(), Some(Tok::IriRef(_) | Tok::PName { .. })) && matches!(self.peek_at(1), Some(Tok::Punct("("))) {
            let name = self.iri()?;
            let args = self.arg_list()?;
            return Ok(Expr::FnCall { name: FnName::Iri(name), args });
        }
        if matches!(self.peek(), Some(Tok::Punct("[")) | Some(Tok::BlankLabel(_))) {
            return Err(self.expected(&["expression"]));
        }
        match self.term() {
            Ok(t) => Ok(Expr::TermRef(t)),
            Err(_) => Err(self.expected(&["expression"])),
        }
    }
}

fn check_projection(ast: &QueryAst) -> Result<(), ParseError> {
    let Some(Projection::Vars(vars)) = &ast.projection else {
        return Ok(());
    };
    let mut seen = BTreeSet::new();
    let mut collect = |t: &Term| {
        if let Term::Variable { name, marker } = t {
            seen.insert((name.clone(), *marker));
        }
    };
    let where_only = QueryAst { projection: None, ..ast.clone() };
    where_only.for_each_term(&mut collect);
    for v in vars {
        if let Term::Variable { name, marker } = v {
            if !seen.contains(&(name.clone(), *marker)) {
                return Err(ParseError::UnboundProjection { variable: name.clone() });
            }
        }
    }
    Ok(())
}
