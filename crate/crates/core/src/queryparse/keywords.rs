//! Keyword presence analytics over parsed queries.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ast::*;
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StructuralKeyword {
    Where,
    Select,
    Ask,
    Distinct,
    /// Any FILTER keyword in the source, including `FILTER NOT EXISTS`.
    Filter,
    Union,
    NotExists,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeywordMatcher {
    Structural(StructuralKeyword),
    /// Matches a term resolving to this absolute IRI anywhere in the query.
    Iri(String),
    /// `rdf:type` or the `a` shorthand.
    RdfType,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Keyword {
    pub label: String,
    #[serde(rename = "match")]
    pub matcher: KeywordMatcher,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordInventory {
    pub keywords: Vec<Keyword>,
}

impl Default for KeywordInventory {
    /// The 21 keywords tracked for the reference dataset.
    fn default() -> Self {
        use KeywordMatcher::*;
        use StructuralKeyword as S;
        let owl = |local: &str| Iri(format!("{}{local}", vocab::OWL));
        let rows: Vec<(&str, KeywordMatcher)> = vec![
            ("WHERE", Structural(S::Where)),
            ("rdfs:subClassOf", Iri(format!("{}subClassOf", vocab::RDFS))),
            ("SELECT", Structural(S::Select)),
            ("owl:onProperty", owl("onProperty")),
            ("owl:someValuesFrom", owl("someValuesFrom")),
            ("rdf:type / a", RdfType),
            ("DISTINCT", Structural(S::Distinct)),
            ("owl:Restriction", owl("Restriction")),
            ("FILTER", Structural(S::Filter)),
            ("owl:Nothing", owl("Nothing")),
            ("ASK", Structural(S::Ask)),
            ("owl:hasValue", owl("hasValue")),
            ("NOT EXISTS", Structural(S::NotExists)),
            ("owl:intersectionOf", owl("intersectionOf")),
            ("owl:unionOf", owl("unionOf")),
            ("UNION", Structural(S::Union)),
            ("owl:disjointWith", owl("disjointWith")),
            ("owl:allValuesFrom", owl("allValuesFrom")),
            ("owl:cardinality", owl("cardinality")),
            ("rdf:first", Iri(vocab::RDF_FIRST.into())),
            ("rdf:rest", Iri(vocab::RDF_REST.into())),
        ];
        KeywordInventory {
            keywords: rows
                .into_iter()
                .map(|(label, matcher)| Keyword { label: label.to_string(), matcher })
                .collect(),
        }
    }
}

impl KeywordInventory {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn find(&self, label: &str) -> Option<&Keyword> {
        self.keywords.iter().find(|k| k.label == label)
    }

    /// Keywords present in the query, in inventory order.
    pub fn presence<'a>(&'a self, ast: &QueryAst) -> Vec<&'a Keyword> {
        let facts = QueryFacts::collect(ast);
        self.keywords.iter().filter(|k| facts.matches(&k.matcher)).collect()
    }

    /// Counts, per keyword, the queries containing it (presence, not
    /// occurrences). Rows are sorted by total, descending; ties keep
    /// inventory order.
    pub fn report<'q>(&self, queries: impl IntoIterator<Item = (&'q str, &'q QueryAst)>) -> KeywordReport {
        let mut ontologies = BTreeSet::new();
        let mut counts: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); self.keywords.len()];
        let mut parsed = 0;
        for (ontology, ast) in queries {
            parsed += 1;
            ontologies.insert(ontology.to_string());
            let facts = QueryFacts::collect(ast);
            for (i, k) in self.keywords.iter().enumerate() {
                if facts.matches(&k.matcher) {
                    *counts[i].entry(ontology.to_string()).or_default() += 1;
                }
            }
        }
        let mut rows: Vec<KeywordRow> = self
            .keywords
            .iter()
            .zip(counts)
            .filter(|(_, per)| !per.is_empty())
            .map(|(k, per)| KeywordRow { keyword: k.label.clone(), total: per.values().sum(), per_ontology: per })
            .collect();
        rows.sort_by(|a, b| b.total.cmp(&a.total));
        KeywordReport { ontologies: ontologies.into_iter().collect(), rows, parsed_queries: parsed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeywordRow {
    pub keyword: String,
    pub total: usize,
    pub per_ontology: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeywordReport {
    pub ontologies: Vec<String>,
    pub rows: Vec<KeywordRow>,
    pub parsed_queries: usize,
}

impl KeywordReport {
    pub fn row(&self, keyword: &str) -> Option<&KeywordRow> {
        self.rows.iter().find(|r| r.keyword == keyword)
    }
}

/// Labels of the default-inventory keywords present in the query.
pub fn keyword_presence(ast: &QueryAst) -> BTreeSet<String> {
    KeywordInventory::default()
        .presence(ast)
        .into_iter()
        .map(|k| k.label.clone())
        .collect()
}

struct QueryFacts {
    structural: BTreeSet<StructuralKeyword>,
    iris: BTreeSet<String>,
}

impl QueryFacts {
    fn collect(ast: &QueryAst) -> Self {
        let mut structural = BTreeSet::from([StructuralKeyword::Where]);
        match ast.verb {
            QueryVerb::Select => structural.insert(StructuralKeyword::Select),
            QueryVerb::Ask => structural.insert(StructuralKeyword::Ask),
        };
        if ast.distinct {
            structural.insert(StructuralKeyword::Distinct);
        }
        ast.for_each_pattern(&mut |p| match p {
            GraphPattern::Filter(_) => {
                structural.insert(StructuralKeyword::Filter);
            }
            GraphPattern::NotExists(_) => {
                structural.insert(StructuralKeyword::Filter);
                structural.insert(StructuralKeyword::NotExists);
            }
            GraphPattern::Union(_, _) => {
                structural.insert(StructuralKeyword::Union);
            }
            _ => {}
        });
        let mut iris = BTreeSet::new();
        ast.for_each_term(&mut |t| {
            if let Ok(Some(iri)) = ast.resolve(t) {
                iris.insert(iri);
            }
        });
        QueryFacts { structural, iris }
    }

    fn matches(&self, m: &KeywordMatcher) -> bool {
        match m {
            KeywordMatcher::Structural(s) => self.structural.contains(s),
            KeywordMatcher::Iri(iri) => self.iris.contains(iri),
            KeywordMatcher::RdfType => self.iris.contains(vocab::RDF_TYPE),
        }
    }
}
