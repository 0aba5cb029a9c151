//! Pattern inventories: filtering candidates, higher-level normalization,
//! coverage and reuse statistics, and surface feature classification.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::linguistics::{tokenize, Pos, TokenAnnotation};
use crate::table::{percent, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternLevel {
    Candidate,
    Pattern,
    Higher,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub text: String,
    pub level: PatternLevel,
    /// Supporting CQ ids, sorted.
    pub support: Vec<String>,
    pub ontologies: BTreeSet<String>,
}

/// The candidate string produced for one CQ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub cq_id: String,
    pub ontology: String,
    pub dematerialized: bool,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub cq_id: String,
    pub text: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterOutcome {
    /// Distinct accepted patterns, most supported first.
    pub patterns: Vec<Pattern>,
    pub rejected: Vec<Rejection>,
}

/// Upper-cases the first character; pattern comparison ignores only
/// sentence-initial case.
pub fn comparison_form(text: &str) -> String {
    let text = text.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut chars = text.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn group(items: impl IntoIterator<Item = (String, String, String)>, level: PatternLevel) -> Vec<Pattern> {
    let mut by_text: BTreeMap<String, (BTreeSet<String>, BTreeSet<String>)> = BTreeMap::new();
    for (text, id, ontology) in items {
        let e = by_text.entry(text).or_default();
        e.0.insert(id);
        e.1.insert(ontology);
    }
    sorted(
        by_text
            .into_iter()
            .map(|(text, (support, ontologies))| Pattern { text, level, support: support.into_iter().collect(), ontologies })
            .collect(),
    )
}

fn sorted(mut patterns: Vec<Pattern>) -> Vec<Pattern> {
    patterns.sort_by(|a, b| b.support.len().cmp(&a.support.len()).then_with(|| a.text.cmp(&b.text)));
    patterns
}

/// Keeps every candidate of a dematerialized CQ, and a materialized CQ's
/// candidate only if some other CQ (in any ontology) yields the same text.
pub fn filter_candidates(candidates: &[Candidate]) -> FilterOutcome {
    let mut producers: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    for c in candidates {
        producers.entry(comparison_form(&c.text)).or_default().insert(&c.cq_id);
    }
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for c in candidates {
        let text = comparison_form(&c.text);
        if c.dematerialized || producers[&text].len() >= 2 {
            accepted.push((text, c.cq_id.clone(), c.ontology.clone()));
        } else {
            rejected.push(Rejection {
                cq_id: c.cq_id.clone(),
                text,
                reason: "materialized CQ with a candidate no other CQ produces".into(),
            });
        }
    }
    FilterOutcome { patterns: group(accepted, PatternLevel::Pattern), rejected }
}

/// Word rewrites, applied in this order.
const WORD_RULES: &[(&[&str], &[&str], bool)] = &[
    (&["are"], &["is"], false),
    (&["any"], &[], false),
    (&["did"], &["do"], false),
    (&["we"], &["I"], false),
    (&["does"], &["do"], false),
    (&["which", "of"], &["which"], false),
    (&["has"], &["have"], false),
    (&["which", "kind"], &["what", "kind"], false),
    (&["will"], &["is"], false),
    (&["which"], &["what"], true),
    (&["possible"], &[], false),
    (&["are", "there"], &[], false),
];

const MERGING_PREPOSITIONS: &[&str] = &["for", "of", "in", "with", "from"];

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

fn apply_word_rule(tokens: &[String], (from, to, initial_only): (&[&str], &[&str], bool)) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let fits = i + from.len() <= tokens.len()
            && (!initial_only || i == 0)
            && from.iter().zip(&tokens[i..]).all(|(f, t)| t.eq_ignore_ascii_case(f));
        if fits {
            let capital = tokens[i].chars().next().is_some_and(char::is_uppercase);
            for (k, w) in to.iter().enumerate() {
                out.push(if k == 0 && capital { capitalize(w) } else { w.to_string() });
            }
            i += from.len();
        } else {
            out.push(tokens[i].clone());
            i += 1;
        }
    }
    out
}

/// A slot token such as `EC2` or `PC1,`: kind, ordinal and trailing text.
fn slot(token: &str) -> Option<(&str, usize, &str)> {
    let kind = token.get(..2).filter(|k| *k == "EC" || *k == "PC")?;
    let digits = token[2..].chars().take_while(char::is_ascii_digit).count();
    if digits == 0 {
        return None;
    }
    Some((kind, token[2..2 + digits].parse().ok()?, &token[2 + digits..]))
}

fn merge_entities(tokens: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    for t in tokens {
        out.push(t);
        let n = out.len();
        if n >= 3 {
            let left = slot(&out[n - 3]).filter(|(k, _, rest)| *k == "EC" && rest.is_empty());
            let prep = MERGING_PREPOSITIONS.contains(&out[n - 2].as_str());
            let right = slot(&out[n - 1]).filter(|(k, _, _)| *k == "EC").map(|(_, _, rest)| rest.to_string());
            if let (Some(_), true, Some(rest)) = (left, prep, right) {
                out.truncate(n - 2);
                out[n - 3].push_str(&rest);
            }
        }
    }
    out
}

/// Renumbers slots densely per kind in order of first appearance.
pub fn recompact(text: &str) -> String {
    let mut maps: BTreeMap<String, BTreeMap<usize, usize>> = BTreeMap::new();
    text.split_whitespace()
        .map(|t| match slot(t) {
            Some((kind, n, rest)) => {
                let m = maps.entry(kind.to_string()).or_default();
                let next = m.len() + 1;
                let k = *m.entry(n).or_insert(next);
                format!("{kind}{k}{rest}")
            }
            None => t.to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn normalize_once(text: &str) -> String {
    let mut tokens: Vec<String> = text.split_whitespace().map(str::to_string).collect();
    for rule in WORD_RULES {
        tokens = apply_word_rule(&tokens, *rule);
    }
    tokens = merge_entities(tokens);
    comparison_form(&recompact(&tokens.join(" ")))
}

/// Higher-level form of a pattern text, iterated to a fixpoint.
pub fn normalize_text(text: &str) -> String {
    let mut cur = comparison_form(text);
    loop {
        let next = normalize_once(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

pub fn normalize_pattern(p: &Pattern) -> Pattern {
    Pattern { text: normalize_text(&p.text), level: PatternLevel::Higher, ..p.clone() }
}

/// Groups patterns by their normalized text.
pub fn higher_level(patterns: &[Pattern]) -> Vec<Pattern> {
    let mut by_text: BTreeMap<String, (BTreeSet<String>, BTreeSet<String>)> = BTreeMap::new();
    for p in patterns {
        let e = by_text.entry(normalize_text(&p.text)).or_default();
        e.0.extend(p.support.iter().cloned());
        e.1.extend(p.ontologies.iter().cloned());
    }
    sorted(
        by_text
            .into_iter()
            .map(|(text, (support, ontologies))| Pattern {
                text,
                level: PatternLevel::Higher,
                support: support.into_iter().collect(),
                ontologies,
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageRow {
    pub ontology: String,
    pub candidates: usize,
    pub patterns: usize,
    pub distinct_patterns: usize,
    pub coverage_pct: f64,
    pub materialized: usize,
    pub dematerialized: usize,
    pub distinct_higher: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageTable {
    pub rows: Vec<CoverageRow>,
    pub total: CoverageRow,
}

impl CoverageTable {
    pub fn row(&self, ontology: &str) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| r.ontology == ontology)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "ontology", "candidates", "patterns", "distinct_patterns", "coverage_pct", "materialized",
            "dematerialized", "distinct_higher",
        ]);
        for r in self.rows.iter().chain([&self.total]) {
            t.push([
                r.ontology.clone(),
                r.candidates.to_string(),
                r.patterns.to_string(),
                r.distinct_patterns.to_string(),
                format!("{:.1}", r.coverage_pct),
                r.materialized.to_string(),
                r.dematerialized.to_string(),
                r.distinct_higher.to_string(),
            ]);
        }
        t
    }
}

/// Per-ontology candidate, pattern and higher-level counts. `ontologies`
/// fixes row order; the total row counts distinct texts across all sets.
pub fn coverage_stats(
    ontologies: &[String],
    candidates: &[Candidate],
    patterns: &[Pattern],
    higher: &[Pattern],
) -> CoverageTable {
    let ontology_of: BTreeMap<&str, &str> = candidates.iter().map(|c| (c.cq_id.as_str(), c.ontology.as_str())).collect();
    let row = |name: &str, filter: &dyn Fn(&str) -> bool| {
        let cands: Vec<&Candidate> = candidates.iter().filter(|c| filter(&c.ontology)).collect();
        let covered = patterns
            .iter()
            .flat_map(|p| &p.support)
            .filter(|id| ontology_of.get(id.as_str()).is_some_and(|o| filter(o)))
            .count();
        let distinct = |ps: &[Pattern]| {
            ps.iter().filter(|p| p.support.iter().any(|id| ontology_of.get(id.as_str()).is_some_and(|o| filter(o)))).count()
        };
        let dematerialized = cands.iter().filter(|c| c.dematerialized).count();
        CoverageRow {
            ontology: name.to_string(),
            candidates: cands.len(),
            patterns: covered,
            distinct_patterns: distinct(patterns),
            coverage_pct: percent(covered, cands.len()),
            materialized: cands.len() - dematerialized,
            dematerialized,
            distinct_higher: distinct(higher),
        }
    };
    CoverageTable {
        rows: ontologies.iter().map(|o| row(o, &|x: &str| x == o)).collect(),
        total: row("Total", &|_| true),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReuseRow {
    pub text: String,
    pub ontologies: BTreeSet<String>,
}

/// Patterns used by two or more ontologies, widest first, then by text.
pub fn cross_set_reuse(patterns: &[Pattern]) -> Vec<ReuseRow> {
    let mut rows: Vec<ReuseRow> = patterns
        .iter()
        .filter(|p| p.ontologies.len() >= 2)
        .map(|p| ReuseRow { text: p.text.clone(), ontologies: p.ontologies.clone() })
        .collect();
    rows.sort_by(|a, b| b.ontologies.len().cmp(&a.ontologies.len()).then_with(|| a.text.cmp(&b.text)));
    rows
}

pub fn reuse_table(rows: &[ReuseRow]) -> Table {
    let mut t = Table::new(["pattern", "ontologies"]);
    for r in rows {
        t.push([r.text.clone(), r.ontologies.iter().cloned().collect::<Vec<_>>().join(", ")]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageRow {
    pub ontology: String,
    pub covered: usize,
    pub distinct: usize,
    pub average: f64,
}

/// CQs covered per distinct pattern in each ontology (0 when there are no
/// patterns). `candidates` gives each CQ's ontology.
pub fn avg_cqs_per_pattern(ontologies: &[String], candidates: &[Candidate], patterns: &[Pattern]) -> Vec<AverageRow> {
    let ontology_of: BTreeMap<&str, &str> = candidates.iter().map(|c| (c.cq_id.as_str(), c.ontology.as_str())).collect();
    ontologies
        .iter()
        .map(|o| {
            let in_o = |id: &String| ontology_of.get(id.as_str()) == Some(&o.as_str());
            let covered = patterns.iter().flat_map(|p| &p.support).filter(|id| in_o(id)).count();
            let distinct = patterns.iter().filter(|p| p.support.iter().any(in_o)).count();
            let average = if distinct == 0 { 0.0 } else { covered as f64 / distinct as f64 };
            AverageRow { ontology: o.clone(), covered, distinct, average }
        })
        .collect()
}

pub fn average_table(rows: &[AverageRow]) -> Table {
    let mut t = Table::new(["ontology", "covered_cqs", "distinct_patterns", "average"]);
    for r in rows {
        t.push([r.ontology.clone(), r.covered.to_string(), r.distinct.to_string(), format!("{:.2}", r.average)]);
    }
    t
}

/// One JSON object per line: text, level, support, ontologies.
pub fn patterns_to_jsonl(patterns: &[Pattern]) -> String {
    patterns
        .iter()
        .map(|p| serde_json::to_string(p).expect("patterns serialize") + "\n")
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuestionType {
    Selection,
    Binary,
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modifier {
    None,
    Numeric,
    Superlative,
    Comparative,
    Difference,
    Extent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DomainElement {
    Time,
    Location,
    Person,
    Period,
    Procedure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqFeatures {
    pub question_type: QuestionType,
    pub polarity: Polarity,
    pub modifier: Modifier,
    pub dinde: BTreeSet<DomainElement>,
}

const BINARY_OPENERS: &[&str] = &["is", "are", "does", "do", "can", "did", "has", "have", "will"];
const NUMBER_WORDS: &[&str] =
    &["num", "number", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "hundred"];
const NOT_SUPERLATIVE: &[&str] = &[
    "test", "rest", "interest", "request", "forest", "guest", "protest", "contest", "harvest", "digest",
    "suggest", "manifest", "west", "nest", "chest", "quest", "arrest", "invest", "honest", "modest",
    "pest", "vest", "zest", "crest", "ingest", "attest", "behest",
];
const COMPARATIVES: &[&str] = &["better", "worse", "worser"];
const GRADABLE: &[&str] = &["more", "less", "fewer"];

fn is_superlative(w: &str) -> bool {
    matches!(w, "best" | "worst" | "most" | "least")
        || (w.len() > 4 && w.ends_with("est") && !NOT_SUPERLATIVE.contains(&w) && !w.ends_with("ffest"))
}

/// Surface classification in the style of Ren et al.'s feature set.
/// `tokens` may be empty; POS tags, when present, mark numbers.
pub fn classify_cq(text: &str, tokens: &[TokenAnnotation]) -> CqFeatures {
    let words: Vec<String> = tokenize(text).into_iter().map(|t| t.surface.to_lowercase()).collect();
    let w: Vec<&str> = words.iter().map(String::as_str).collect();
    let begins = |prefix: &[&str]| w.len() >= prefix.len() && w.iter().zip(prefix).all(|(a, b)| a == b);
    let has = |x: &str| w.contains(&x);

    let question_type = if begins(&["how", "many"]) || begins(&["how", "much"]) {
        QuestionType::Count
    } else if w.first().is_some_and(|f| BINARY_OPENERS.contains(f)) {
        QuestionType::Binary
    } else {
        QuestionType::Selection
    };

    let or_not = w.windows(2).any(|p| p == ["or", "not"]);
    let polarity = if or_not {
        Polarity::Both
    } else if has("not") || has("never") || has("n't") {
        Polarity::Negative
    } else {
        Polarity::Positive
    };

    let numeric = has("exactly")
        || tokens.iter().any(|t| t.pos == Pos::Num)
        || w.iter().any(|x| x.chars().all(|c| c.is_ascii_digit()) || NUMBER_WORDS.contains(x));
    let than = w.iter().position(|x| *x == "than");
    let comparative = w.iter().any(|x| COMPARATIVES.contains(x))
        || than.is_some_and(|k| {
            w[..k].iter().any(|x| GRADABLE.contains(x)) || (k > 0 && w[k - 1].len() > 3 && w[k - 1].ends_with("er"))
        });
    let modifier = if numeric {
        Modifier::Numeric
    } else if w.iter().any(|x| is_superlative(x)) {
        Modifier::Superlative
    } else if comparative {
        Modifier::Comparative
    } else if w.windows(2).any(|p| (p[0] == "difference" || p[0] == "differences") && p[1] == "between") {
        Modifier::Difference
    } else if begins(&["to", "what", "extent"]) {
        Modifier::Extent
    } else {
        Modifier::None
    };

    let mut dinde = BTreeSet::new();
    if begins(&["when"]) || begins(&["at", "what", "point"]) || begins(&["how", "long"]) {
        dinde.insert(DomainElement::Time);
    }
    if begins(&["where"]) || begins(&["in", "which"]) {
        dinde.insert(DomainElement::Location);
    }
    if begins(&["who"]) {
        dinde.insert(DomainElement::Person);
    }
    if w.windows(2).any(|p| p == ["how", "long"]) || has("period") {
        dinde.insert(DomainElement::Period);
    }
    if begins(&["how", "do", "i"]) || begins(&["how", "can", "i"]) {
        dinde.insert(DomainElement::Procedure);
    }
    CqFeatures { question_type, polarity, modifier, dinde }
}
