//! CQ pattern to query signature mapping, and signal word/phrase mining.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::patterns::PatternLevel;
use crate::queryparse::{keyword_presence, parse_query, QueryAst, QueryVerb};
use crate::signatures::{canonicalize, Signature};
use crate::table::{percent, Table};
use crate::vocab;

/// One CQ that has a parsed translation, with everything the analyses use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslatedCq {
    pub cq_id: String,
    pub ontology: String,
    pub text: String,
    /// Candidate-level pattern text; slots act as wildcards for phrases.
    pub pattern_text: String,
    pub verb: QueryVerb,
    pub keywords: BTreeSet<String>,
    /// `None` when the query was skipped by the canonicalization guard.
    pub signature_id: Option<String>,
    pub signature: Option<Signature>,
}

impl TranslatedCq {
    pub fn new(
        cq_id: &str,
        ontology: &str,
        text: &str,
        pattern_text: &str,
        ast: &QueryAst,
        signature: Option<(String, Signature)>,
    ) -> Self {
        let (signature_id, signature) = signature.map_or((None, None), |(id, s)| (Some(id), Some(s)));
        TranslatedCq {
            cq_id: cq_id.to_string(),
            ontology: ontology.to_string(),
            text: text.to_string(),
            pattern_text: pattern_text.to_string(),
            verb: ast.verb,
            keywords: keyword_presence(ast),
            signature_id,
            signature,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappingEdge {
    pub pattern_text: String,
    pub pattern_level: PatternLevel,
    pub signature_id: String,
    pub witness_cq_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MappingSummary {
    pub patterns: usize,
    pub signatures: usize,
    pub edges: usize,
    pub patterns_with_multiple_signatures: usize,
    pub signatures_with_multiple_patterns: usize,
    /// degree → number of patterns with that many signatures
    pub pattern_degrees: BTreeMap<usize, usize>,
    pub signature_degrees: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mapping {
    pub edges: Vec<MappingEdge>,
    pub summary: MappingSummary,
}

/// Bipartite pattern/signature graph from `(cq id, pattern text,
/// signature id)` links; one edge per distinct pair.
pub fn build_mapping<'a>(links: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>, level: PatternLevel) -> Mapping {
    let mut pairs: BTreeMap<(String, String), BTreeSet<String>> = BTreeMap::new();
    for (cq, pattern, sig) in links {
        pairs.entry((pattern.to_string(), sig.to_string())).or_default().insert(cq.to_string());
    }
    let mut by_pattern: BTreeMap<&str, usize> = BTreeMap::new();
    let mut by_sig: BTreeMap<&str, usize> = BTreeMap::new();
    for (p, s) in pairs.keys() {
        *by_pattern.entry(p).or_default() += 1;
        *by_sig.entry(s).or_default() += 1;
    }
    let histogram = |m: &BTreeMap<&str, usize>| {
        let mut h = BTreeMap::new();
        for d in m.values() {
            *h.entry(*d).or_default() += 1;
        }
        h
    };
    let summary = MappingSummary {
        patterns: by_pattern.len(),
        signatures: by_sig.len(),
        edges: pairs.len(),
        patterns_with_multiple_signatures: by_pattern.values().filter(|d| **d >= 2).count(),
        signatures_with_multiple_patterns: by_sig.values().filter(|d| **d >= 2).count(),
        pattern_degrees: histogram(&by_pattern),
        signature_degrees: histogram(&by_sig),
    };
    let edges = pairs
        .into_iter()
        .map(|((pattern_text, signature_id), w)| MappingEdge {
            pattern_text,
            pattern_level: level,
            signature_id,
            witness_cq_ids: w.into_iter().collect(),
        })
        .collect();
    Mapping { edges, summary }
}

impl Mapping {
    pub fn edge_table(&self) -> Table {
        let mut t = Table::new(["pattern", "signature", "witnesses"]);
        for e in &self.edges {
            t.push([e.pattern_text.clone(), e.signature_id.clone(), e.witness_cq_ids.join(" ")]);
        }
        t
    }

    pub fn summary_table(&self) -> Table {
        let s = &self.summary;
        let mut t = Table::new(["measure", "value"]);
        for (k, v) in [
            ("patterns", s.patterns),
            ("signatures", s.signatures),
            ("edges", s.edges),
            ("patterns with 2+ signatures", s.patterns_with_multiple_signatures),
            ("signatures with 2+ patterns", s.signatures_with_multiple_patterns),
        ] {
            t.push([k.to_string(), v.to_string()]);
        }
        for (d, n) in &s.pattern_degrees {
            t.push([format!("patterns with {d} signature(s)"), n.to_string()]);
        }
        for (d, n) in &s.signature_degrees {
            t.push([format!("signatures with {d} pattern(s)"), n.to_string()]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalMatcher {
    /// First word of the raw CQ text is one of these (case-insensitive).
    InitialWordClass(Vec<String>),
    /// Phrase over the pattern-level text. Tokens may hold `/`-separated
    /// alternatives; `EC`, `PC` and `NUM` match any slot or number, and `…`
    /// (or `...`) matches one or more tokens.
    ContainsPhrase(String),
    /// Whole word in the raw CQ text.
    ContainsWord(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalTarget {
    QueryVerb(QueryVerb),
    KeywordPresent(String),
    /// A query text with `:URI` standing for any term; compared by
    /// canonical verb and WHERE skeleton.
    SignatureSkeleton(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalRule {
    pub id: String,
    /// Display form of the signal.
    pub signal: String,
    pub matcher: SignalMatcher,
    pub target: SignalTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalRules {
    pub rules: Vec<SignalRule>,
}

impl SignalRules {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub const SKELETON_SUBCLASS_FILTER: &str =
    "SELECT DISTINCT * WHERE { ?x rdfs:subClassOf :URI . FILTER(?x != :URI && ?x != owl:Nothing) }";
pub const SKELETON_RESTRICTION_PROPERTY: &str =
    "SELECT DISTINCT * WHERE { [] rdfs:subClassOf :URI, [ owl:onProperty ?x; owl:someValuesFrom [] ]. }";
pub const SKELETON_BETWEEN: &str =
    "SELECT DISTINCT * WHERE { :URI rdfs:subClassOf ?x . ?x rdfs:subClassOf :URI. FILTER(?x != :URI && ?x != :URI) }";
pub const SKELETON_DIRECT_SUBCLASS: &str = "SELECT DISTINCT * WHERE { ?x rdfs:subClassOf :URI. FILTER NOT EXISTS { ?x rdfs:subClassOf ?y . ?y rdfs:subClassOf :URI. } FILTER(?x != :URI && ?x != owl:Nothing) }";

impl Default for SignalRules {
    /// Both published signal tables: five phrase rows and five word rows.
    fn default() -> Self {
        let words = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
        let rule = |id: &str, signal: &str, matcher: SignalMatcher, target: SignalTarget| SignalRule {
            id: id.into(),
            signal: signal.into(),
            matcher,
            target,
        };
        use SignalMatcher::*;
        use SignalTarget::*;
        SignalRules {
            rules: vec![
                rule(
                    "possible-types",
                    "What are the possible types",
                    ContainsPhrase("what are the possible types".into()),
                    SignatureSkeleton(SKELETON_SUBCLASS_FILTER.into()),
                ),
                rule(
                    "types-of",
                    "What are the types of",
                    ContainsPhrase("what are the types of".into()),
                    SignatureSkeleton(SKELETON_SUBCLASS_FILTER.into()),
                ),
                rule(
                    "what-types-of",
                    "What types of … is/are",
                    ContainsPhrase("what types of … is/are".into()),
                    SignatureSkeleton(SKELETON_RESTRICTION_PROPERTY.into()),
                ),
                rule(
                    "kind-of",
                    "Which/what kind of … is/are",
                    ContainsPhrase("which/what kind of … is/are".into()),
                    SignatureSkeleton(SKELETON_BETWEEN.into()),
                ),
                rule(
                    "main-types",
                    "What are the main types of",
                    ContainsPhrase("what are the main types of".into()),
                    SignatureSkeleton(SKELETON_DIRECT_SUBCLASS.into()),
                ),
                rule(
                    "initial-select",
                    "Which/What/Who/Where/When (initial)",
                    InitialWordClass(words(&["which", "what", "who", "where", "when"])),
                    QueryVerb(crate::queryparse::QueryVerb::Select),
                ),
                rule(
                    "initial-ask",
                    "Is/Are/Can/Does (initial)",
                    InitialWordClass(words(&["is", "are", "can", "does"])),
                    QueryVerb(crate::queryparse::QueryVerb::Ask),
                ),
                rule("or", "or", ContainsWord("or".into()), KeywordPresent("owl:unionOf".into())),
                rule("and", "and", ContainsWord("and".into()), KeywordPresent("owl:intersectionOf".into())),
                rule(
                    "exactly",
                    "exactly NUMBER ENTITY",
                    ContainsPhrase("exactly NUM EC".into()),
                    KeywordPresent("owl:cardinality".into()),
                ),
            ],
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("rule {rule}: skeleton does not parse or canonicalize: {message}")]
pub struct RuleError {
    pub rule: String,
    pub message: String,
}

fn skeleton_signature(text: &str) -> Result<Signature, String> {
    let mut prefixes = vocab::standard_prefixes();
    prefixes.insert(String::new(), "urn:cqscope:skeleton#".into());
    let ast = parse_query(text, &prefixes).map_err(|e| e.to_string())?;
    canonicalize(&ast).map_err(|e| e.to_string())
}

fn words_of(text: &str) -> Vec<String> {
    crate::linguistics::tokenize(text)
        .into_iter()
        .map(|t| t.surface.to_lowercase())
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .collect()
}

fn is_slot(token: &str, kind: &str) -> bool {
    token.len() > 2
        && token[..2].eq_ignore_ascii_case(kind)
        && token[2..].chars().all(|c| c.is_ascii_digit())
}

fn is_number(token: &str) -> bool {
    token.chars().all(|c| c.is_ascii_digit())
        || ["one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "num", "number"]
            .contains(&token)
}

fn pattern_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| matches!(c, '?' | ',' | '.' | '!')).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

fn token_matches(pat: &str, tok: &str) -> bool {
    pat.split('/').any(|alt| match alt {
        "EC" => is_slot(tok, "ec"),
        "PC" => is_slot(tok, "pc"),
        "NUM" => is_number(tok),
        _ => alt.eq_ignore_ascii_case(tok),
    })
}

fn match_here(pat: &[&str], toks: &[String]) -> bool {
    match pat.split_first() {
        None => true,
        Some((&p, rest)) if p == "…" || p == "..." => {
            (1..=toks.len()).any(|k| match_here(rest, &toks[k..]))
        }
        Some((&p, rest)) => toks.first().is_some_and(|t| token_matches(p, t)) && match_here(rest, &toks[1..]),
    }
}

/// Case-insensitive phrase search over pattern text.
pub fn phrase_matches(phrase: &str, pattern_text: &str) -> bool {
    let pat: Vec<&str> = phrase.split_whitespace().collect();
    let toks = pattern_tokens(pattern_text);
    (0..toks.len().max(1)).any(|i| match_here(&pat, &toks[i.min(toks.len())..]))
}

impl SignalMatcher {
    pub fn matches(&self, cq: &TranslatedCq) -> bool {
        match self {
            SignalMatcher::InitialWordClass(ws) => {
                words_of(&cq.text).first().is_some_and(|f| ws.iter().any(|w| w.eq_ignore_ascii_case(f)))
            }
            SignalMatcher::ContainsWord(w) => words_of(&cq.text).iter().any(|x| x.eq_ignore_ascii_case(w)),
            SignalMatcher::ContainsPhrase(p) => phrase_matches(p, &cq.pattern_text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalRow {
    pub rule_id: String,
    pub signal: String,
    pub target: String,
    pub numerator: usize,
    pub denominator: usize,
    pub percent: f64,
    /// False when the matching group has fewer than two CQs.
    pub evidential: bool,
    pub matching_cq_ids: Vec<String>,
}

/// Counts, per rule, translated CQs matching the signal (denominator) and
/// those whose query also satisfies the target (numerator).
pub fn mine_signals(cqs: &[TranslatedCq], rules: &SignalRules) -> Result<Vec<SignalRow>, RuleError> {
    rules
        .rules
        .iter()
        .map(|rule| {
            let skeleton = match &rule.target {
                SignalTarget::SignatureSkeleton(s) => Some(
                    skeleton_signature(s).map_err(|message| RuleError { rule: rule.id.clone(), message })?,
                ),
                _ => None,
            };
            let satisfied = |cq: &TranslatedCq| match &rule.target {
                SignalTarget::QueryVerb(v) => cq.verb == *v,
                SignalTarget::KeywordPresent(k) => cq.keywords.contains(k),
                SignalTarget::SignatureSkeleton(_) => {
                    let want = skeleton.as_ref().expect("skeleton parsed above");
                    cq.signature.as_ref().is_some_and(|s| s.verb == want.verb && s.skeleton == want.skeleton)
                }
            };
            let matching: Vec<&TranslatedCq> = cqs.iter().filter(|c| rule.matcher.matches(c)).collect();
            let numerator = matching.iter().filter(|c| satisfied(c)).count();
            let denominator = matching.len();
            Ok(SignalRow {
                rule_id: rule.id.clone(),
                signal: rule.signal.clone(),
                target: match &rule.target {
                    SignalTarget::QueryVerb(v) => v.keyword().to_string(),
                    SignalTarget::KeywordPresent(k) => k.clone(),
                    SignalTarget::SignatureSkeleton(s) => s.clone(),
                },
                numerator,
                denominator,
                percent: percent(numerator, denominator),
                evidential: denominator >= 2,
                matching_cq_ids: matching.iter().map(|c| c.cq_id.clone()).collect(),
            })
        })
        .collect()
}

pub fn signal_table(rows: &[SignalRow]) -> Table {
    let mut t = Table::new(["signal", "target", "n/d", "percent", "evidential"]);
    for r in rows {
        t.push([
            r.signal.clone(),
            r.target.clone(),
            format!("{}/{}", r.numerator, r.denominator),
            format!("{:.1}", r.percent),
            r.evidential.to_string(),
        ]);
    }
    t
}

pub const DEFAULT_STOPLIST: &[&str] = &[
    "the", "a", "an", "of", "for", "in", "on", "to", "with", "by", "from", "at", "as", "and", "or", "is", "are",
    "be", "do", "does", "did", "that", "this", "it", "its", "there", "i", "we", "can", "ec", "pc",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscoveryRow {
    pub ngram: String,
    pub group_size: usize,
    pub subgroup_size: usize,
    pub ratio: f64,
    pub signature_id: String,
    pub members: Vec<String>,
}

/// Shared n-grams (1 to 6 tokens) of the pattern texts whose largest
/// same-signature subgroup reaches `min_support`. N-grams made only of
/// stop words or slots are dropped; among n-grams with the same CQ group
/// only the longest (fewest slots, then
/// alphabetical) is kept.
pub fn discover_signals(cqs: &[TranslatedCq], min_support: usize, stoplist: &[String]) -> Vec<DiscoveryRow> {
    let min_support = min_support.max(2);
    let mut groups: BTreeMap<Vec<String>, BTreeSet<usize>> = BTreeMap::new();
    for (k, cq) in cqs.iter().enumerate() {
        let toks: Vec<String> = pattern_tokens(&cq.pattern_text)
            .into_iter()
            .map(|t| if is_slot(&t, "ec") { "EC".into() } else if is_slot(&t, "pc") { "PC".into() } else { t })
            .collect();
        for n in 1..=6 {
            for w in toks.windows(n) {
                if w.iter().all(|t| stoplist.iter().any(|s| s.eq_ignore_ascii_case(t))) {
                    continue;
                }
                groups.entry(w.to_vec()).or_default().insert(k);
            }
        }
    }
    let mut best_for_group: BTreeMap<BTreeSet<usize>, Vec<String>> = BTreeMap::new();
    for (gram, members) in groups {
        if members.len() < min_support {
            continue;
        }
        let rank = |g: &[String]| (std::cmp::Reverse(g.len()), g.iter().filter(|t| *t == "EC" || *t == "PC").count(), g.to_vec());
        let keep = best_for_group.get(&members).is_none_or(|cur| rank(&gram) < rank(cur));
        if keep {
            best_for_group.insert(members, gram);
        }
    }
    let mut rows: Vec<DiscoveryRow> = best_for_group
        .into_iter()
        .filter_map(|(members, gram)| {
            let mut by_sig: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
            for &m in &members {
                if let Some(s) = &cqs[m].signature_id {
                    by_sig.entry(s).or_default().push(m);
                }
            }
            let (sig, sub) = by_sig
                .into_iter()
                .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| signature_order(b.0).cmp(&signature_order(a.0))))?;
            (sub.len() >= min_support).then(|| DiscoveryRow {
                ngram: gram.join(" "),
                group_size: members.len(),
                subgroup_size: sub.len(),
                ratio: sub.len() as f64 / members.len() as f64,
                signature_id: sig.to_string(),
                members: sub.iter().map(|&m| cqs[m].cq_id.clone()).collect(),
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        b.ratio
            .total_cmp(&a.ratio)
            .then_with(|| b.subgroup_size.cmp(&a.subgroup_size))
            .then_with(|| a.ngram.cmp(&b.ngram))
    });
    rows
}

/// `S12` sorts after `S2`.
fn signature_order(id: &str) -> (usize, &str) {
    (id.trim_start_matches(|c: char| !c.is_ascii_digit()).parse().unwrap_or(usize::MAX), id)
}

pub fn discovery_table(rows: &[DiscoveryRow]) -> Table {
    let mut t = Table::new(["ngram", "subgroup/group", "ratio", "signature", "members"]);
    for r in rows {
        t.push([
            r.ngram.clone(),
            format!("{}/{}", r.subgroup_size, r.group_size),
            format!("{:.2}", r.ratio),
            r.signature_id.clone(),
            r.members.join(" "),
        ]);
    }
    t
}
