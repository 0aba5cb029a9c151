use std::fmt::Write;

use super::ast::*;

/// Pretty-prints a query. Reparsing the output with the same injected prefix
/// table yields a structurally equal tree.
pub fn serialize_query(ast: &QueryAst) -> String {
    let mut out = String::new();
    for (label, iri) in &ast.declared_prefixes {
        let _ = writeln!(out, "PREFIX {label}: <{iri}>");
    }
    out.push_str(ast.verb.keyword());
    if ast.distinct {
        out.push_str(" DISTINCT");
    }
    match &ast.projection {
        Some(Projection::Star) => out.push_str(" *"),
        Some(Projection::Vars(vars)) => {
            for v in vars {
                out.push(' ');
                out.push_str(&term(v));
            }
        }
        None => {}
    }
    out.push_str("\nWHERE ");
    group(&ast.where_clause, 0, &mut out);
    out.push('\n');
    out
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn group(p: &GraphPattern, level: usize, out: &mut String) {
    let GraphPattern::Group(children) = p else {
        // Non-group patterns are wrapped so the output stays parseable.
        group(&GraphPattern::Group(vec![p.clone()]), level, out);
        return;
    };
    if children.iter().all(|c| matches!(c, GraphPattern::Bgp(ts) if ts.is_empty())) {
        out.push_str("{ }");
        return;
    }
    out.push_str("{\n");
    for child in children {
        element(child, level + 1, out);
    }
    indent(level, out);
    out.push('}');
}

fn element(p: &GraphPattern, level: usize, out: &mut String) {
    match p {
        GraphPattern::Bgp(triples) => {
            for t in triples {
                indent(level, out);
                out.push_str(&triple(t));
                out.push_str(" .\n");
            }
        }
        GraphPattern::Group(_) => {
            indent(level, out);
            group(p, level, out);
            out.push('\n');
        }
        GraphPattern::Union(_, _) => {
            indent(level, out);
            union(p, level, out);
            out.push('\n');
        }
        GraphPattern::Filter(e) => {
            indent(level, out);
            let _ = writeln!(out, "FILTER({})", expr(e));
        }
        GraphPattern::NotExists(inner) => {
            indent(level, out);
            out.push_str("FILTER NOT EXISTS ");
            group(inner, level, out);
            out.push('\n');
        }
        GraphPattern::Bind(e, v) => {
            indent(level, out);
            let _ = writeln!(out, "BIND({} AS {})", expr(e), term(v));
        }
    }
}

fn union(p: &GraphPattern, level: usize, out: &mut String) {
    match p {
        GraphPattern::Union(a, b) => {
            union(a, level, out);
            out.push_str(" UNION ");
            group(b, level, out);
        }
        other => group(other, level, out),
    }
}

fn triple(t: &TriplePattern) -> String {
    let mut s = node(&t.subject);
    if !t.properties.is_empty() {
        s.push(' ');
        s.push_str(&props(&t.properties));
    }
    s
}

fn props(props: &[PropertyObjects]) -> String {
    props
        .iter()
        .map(|po| {
            let objects: Vec<String> = po.objects.iter().map(node).collect();
            format!("{} {}", path(&po.predicate), objects.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" ; ")
}

fn node(n: &Node) -> String {
    match n {
        Node::Term(t) => term(t),
        Node::BlankPropertyList(p) => format!("[ {} ]", props(p)),
        Node::Collection(items) => {
            let items: Vec<String> = items.iter().map(node).collect();
            format!("( {} )", items.join(" "))
        }
    }
}

fn path(p: &PropertyPath) -> String {
    match p {
        PropertyPath::Atom(t) => term(t),
        PropertyPath::Sequence(parts) => parts.iter().map(path).collect::<Vec<_>>().join("/"),
        PropertyPath::ZeroOrMore(inner) => format!("{}*", path(inner)),
    }
}

pub(crate) fn term(t: &Term) -> String {
    match t {
        Term::Iri(iri) => format!("<{iri}>"),
        Term::PrefixedName { prefix, local } => format!("{prefix}:{local}"),
        Term::BlankNodeLabel(l) => format!("_:{l}"),
        Term::AnonBlank(_) => "[]".to_string(),
        Term::Variable { name, marker } => match marker {
            VarMarker::Question => format!("?{name}"),
            VarMarker::Placeholder => format!("${name}"),
        },
        Term::Literal { lexical, datatype, language } => {
            let mut s = quote(lexical);
            if let Some(lang) = language {
                s.push('@');
                s.push_str(lang);
            } else if let Some(dt) = datatype {
                s.push_str("^^");
                s.push_str(&term(dt));
            }
            s
        }
        Term::A => "a".to_string(),
    }
}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub(crate) fn expr(e: &Expr) -> String {
    match e {
        Expr::Compare(op, a, b) => format!("{} {} {}", expr(a), op.symbol(), expr(b)),
        Expr::And(a, b) => format!("{} && {}", expr(a), expr(b)),
        Expr::Or(a, b) => format!("{} || {}", expr(a), expr(b)),
        Expr::Not(a) => format!("!{}", expr(a)),
        Expr::In { expr: x, list, negated } => {
            let items: Vec<String> = list.iter().map(expr).collect();
            format!("{} {}IN ({})", expr(x), if *negated { "NOT " } else { "" }, items.join(", "))
        }
        Expr::FnCall { name, args } => {
            let name = match name {
                FnName::Builtin(b) => b.clone(),
                FnName::Iri(t) => term(t),
            };
            let args: Vec<String> = args.iter().map(expr).collect();
            format!("{name}({})", args.join(", "))
        }
        Expr::Arith(op, a, b) => {
            let sym = match op {
                ArithOp::Add => "+",
                ArithOp::Sub => "-",
            };
            format!("{} {sym} {}", expr(a), expr(b))
        }
        Expr::TermRef(t) => term(t),
        Expr::Paren(inner) => format!("({})", expr(inner)),
    }
}
