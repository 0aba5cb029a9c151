//! Namespaces and prefix tables.

use std::collections::BTreeMap;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
pub const RDF_REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
pub const RDF_NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

/// The namespaces whose terms stay concrete in query signatures, with their
/// conventional prefix labels.
pub const RESERVED: [(&str, &str); 4] = [("rdf", RDF), ("rdfs", RDFS), ("owl", OWL), ("xsd", XSD)];

pub type PrefixTable = BTreeMap<String, String>;

pub fn standard_prefixes() -> PrefixTable {
    RESERVED
        .iter()
        .map(|(p, ns)| (p.to_string(), ns.to_string()))
        .collect()
}

/// Compacts an absolute IRI in a reserved namespace to `prefix:local`.
pub fn compact_reserved(iri: &str) -> Option<String> {
    RESERVED.iter().find_map(|(p, ns)| {
        iri.strip_prefix(ns)
            .map(|local| format!("{p}:{local}"))
    })
}

pub fn is_reserved(iri: &str) -> bool {
    RESERVED.iter().any(|(_, ns)| iri.starts_with(ns))
}

/// Validates a prefix label (`PN_PREFIX` in SPARQL, or empty).
pub fn is_valid_prefix_label(label: &str) -> bool {
    if label.is_empty() {
        return true;
    }
    let mut chars = label.chars();
    let first = chars.next().unwrap();
    if !first.is_alphabetic() {
        return false;
    }
    if label.ends_with('.') {
        return false;
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

/// Loose absolute-IRI check: a scheme followed by `:` and no whitespace.
pub fn is_absolute_iri(iri: &str) -> bool {
    let Some((scheme, rest)) = iri.split_once(':') else {
        return false;
    };
    let mut sc = scheme.chars();
    matches!(sc.next(), Some(c) if c.is_ascii_alphabetic())
        && sc.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !rest.is_empty()
        && !iri.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
}

/// Prefixes used by the queries of the reference CQ dataset, whose query
/// texts omit their preambles.
pub const DATASET_PREFIXES: [(&str, &str); 13] = [
    ("awo", "http://www.meteck.org/teaching/ontologies/AfricanWildlifeOntology1.owl#"),
    ("stuff", "http://www.meteck.org/files/ontologies/stuff.owl#"),
    ("event", "http://www.demcare.eu/ontologies/event.owl#"),
    ("exch", "http://www.demcare.eu/ontologies/exchangemodel.owl#"),
    ("home", "http://www.demcare.eu/ontologies/home.owl#"),
    ("lab", "http://www.demcare.eu/ontologies/lab.owl#"),
    ("swo", "http://www.ebi.ac.uk/swo/"),
    ("efo-swo", "http://www.ebi.ac.uk/efo/swo/"),
    ("maturity", "http://www.ebi.ac.uk/swo/maturity/"),
    ("interface", "http://www.ebi.ac.uk/swo/interface/"),
    ("obo", "http://purl.obolibrary.org/obo/"),
    ("OntoDT", "http://www.ontodm.com/OntoDT#"),
    ("OntoDT2", "http://ontodm.com/OntoDT#"),
];

/// Prefix table for one of the five ontologies of the reference dataset:
/// the reserved namespaces plus every dataset prefix.
pub fn builtin_ontology_prefixes(short_name: &str) -> Option<PrefixTable> {
    if !BUILTIN_ONTOLOGIES.contains(&short_name) {
        return None;
    }
    let mut table = standard_prefixes();
    for (p, ns) in DATASET_PREFIXES {
        table.insert(p.to_string(), ns.to_string());
    }
    Some(table)
}

pub const BUILTIN_ONTOLOGIES: [&str; 5] = ["SWO", "Stuff", "AWO", "DemCare", "OntoDT"];
