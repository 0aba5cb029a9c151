//! One emitter per subcommand; `report` calls all of them on a single
//! analysis, so its files are exactly the union of the individual runs.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{anyhow, Result};
use serde_json::json;

use cqscope::calibration::calibration_table;
use cqscope::corpus::Corpus;
use cqscope::correspondence::{discovery_table, signal_table, Mapping};
use cqscope::patterns::{average_table, patterns_to_jsonl, reuse_table, CqFeatures, Pattern, PatternLevel};
use cqscope::pipeline::{chunk_corpus, classify_all, Analysis, Chunking, PatternInventory, PipelineConfig, QueryAnalysis, Signals};
use cqscope::queryparse::{parse_query_strict, serialize_query};
use cqscope::table::{percent, Table};

use crate::output::Writer;
use crate::Command;

/// Writes the validation table and returns the number of issues found.
pub fn validate(corpus: &Corpus, w: &mut Writer) -> Result<usize> {
    let mut t = Table::new(["id", "ontology", "issue"]);
    for q in &corpus.questions {
        let Some(text) = &q.query_text else { continue };
        if let Err(e) = parse_query_strict(text, &corpus.prefixes_for(q)) {
            eprintln!("query {}: {e}", q.id);
            t.push([q.id.clone(), q.ontology.clone(), e.to_string()]);
        }
    }
    let issues = t.rows.len();
    let queries = corpus.questions.iter().filter(|q| q.query_text.is_some()).count();
    eprintln!(
        "{} ontologies, {} questions, {} queries, {} issue(s)",
        corpus.ontologies.len(),
        corpus.questions.len(),
        queries,
        issues
    );
    w.table("validation", "Validation issues", &t)?;
    Ok(issues)
}

pub fn single(command: Command, corpus: &Corpus, config: &PipelineConfig, w: &mut Writer) -> Result<()> {
    match command {
        Command::Chunk => chunk(&chunk_corpus(corpus, config), w),
        Command::Patterns => {
            let chunking = chunk_corpus(corpus, config);
            patterns(&PatternInventory::build(corpus, &chunking), w)
        }
        Command::Classify => {
            let chunking = chunk_corpus(corpus, config);
            classify(&chunking, &classify_all(&chunking), w)
        }
        Command::Parse => parse(corpus, &QueryAnalysis::build(corpus, config), w),
        Command::Keywords => keywords(&QueryAnalysis::build(corpus, config), w),
        Command::Signatures => signatures(&QueryAnalysis::build(corpus, config), w),
        Command::Map => {
            let a = analyse(corpus, config)?;
            map(&a.mapping_pattern, &a.mapping_higher, w)
        }
        Command::Signals => signals(&analyse(corpus, config)?.signals, w),
        Command::Validate | Command::Report => unreachable!("handled by the caller"),
    }
}

pub fn all(corpus: &Corpus, config: &PipelineConfig, w: &mut Writer) -> Result<()> {
    let a = analyse(corpus, config)?;
    validate(corpus, w)?;
    chunk(&a.chunking, w)?;
    patterns(&a.inventory, w)?;
    classify(&a.chunking, &a.features, w)?;
    parse(corpus, &a.queries, w)?;
    keywords(&a.queries, w)?;
    signatures(&a.queries, w)?;
    map(&a.mapping_pattern, &a.mapping_higher, w)?;
    signals(&a.signals, w)
}

pub fn calibration(corpus: &Corpus, config: &PipelineConfig, w: &mut Writer) -> Result<()> {
    let a = analyse(corpus, config)?;
    w.table("calibration", "Computed values against published reference values", &calibration_table(&a))
}

fn analyse(corpus: &Corpus, config: &PipelineConfig) -> Result<Analysis> {
    Analysis::run(corpus, config).map_err(|e| anyhow!("signal rules: {e}"))
}

fn chunk(chunking: &Chunking, w: &mut Writer) -> Result<()> {
    let mut t = Table::new(["id", "ontology", "text", "candidate", "overridden", "chunks", "tokens"]);
    let mut jsonl = String::new();
    for c in &chunking.cqs {
        let chunks = c.chunks.iter().map(|k| format!("{}={}", k.slot(), k.surface_text)).collect::<Vec<_>>().join(" | ");
        let tokens = c
            .tokens
            .iter()
            .map(|t| format!("{}/{}/{}/{}", t.surface, t.pos, t.head, t.deprel))
            .collect::<Vec<_>>()
            .join(" ");
        t.push([c.cq_id.clone(), c.ontology.clone(), c.text.clone(), c.candidate.clone(), c.overridden.to_string(), chunks, tokens]);
        jsonl.push_str(&serde_json::to_string(c)?);
        jsonl.push('\n');
    }
    w.table("chunks", "Chunks and pattern candidates", &t)?;
    w.file("chunks.jsonl", &jsonl)?;
    let mut e = Table::new(["id", "error"]);
    for (id, msg) in &chunking.errors {
        eprintln!("cq {id}: {msg}");
        e.push([id.clone(), msg.clone()]);
    }
    w.table("chunk_errors", "CQs that could not be annotated", &e)
}

fn pattern_table(patterns: &[Pattern]) -> Table {
    let mut t = Table::new(["level", "pattern", "cqs", "ontologies", "support"]);
    for p in patterns {
        t.push([
            level_name(p.level).to_string(),
            p.text.clone(),
            p.support.len().to_string(),
            p.ontologies.iter().cloned().collect::<Vec<_>>().join(", "),
            p.support.join(" "),
        ]);
    }
    t
}

fn level_name(level: PatternLevel) -> &'static str {
    match level {
        PatternLevel::Candidate => "candidate",
        PatternLevel::Pattern => "pattern",
        PatternLevel::Higher => "higher",
    }
}

fn patterns(inv: &PatternInventory, w: &mut Writer) -> Result<()> {
    let mut by_text: BTreeMap<&str, (Vec<String>, BTreeSet<String>)> = BTreeMap::new();
    for c in &inv.candidates {
        let e = by_text.entry(&c.text).or_default();
        e.0.push(c.cq_id.clone());
        e.1.insert(c.ontology.clone());
    }
    let mut candidates: Vec<Pattern> = by_text
        .into_iter()
        .map(|(text, (mut support, ontologies))| {
            support.sort();
            Pattern { text: text.to_string(), level: PatternLevel::Candidate, support, ontologies }
        })
        .collect();
    candidates.sort_by(|a, b| b.support.len().cmp(&a.support.len()).then_with(|| a.text.cmp(&b.text)));

    w.table("candidates", "Pattern candidates", &pattern_table(&candidates))?;
    w.table("patterns", "Patterns", &pattern_table(inv.patterns()))?;
    w.table("higher_patterns", "Higher-level patterns", &pattern_table(&inv.higher))?;
    let mut inventory = patterns_to_jsonl(&candidates);
    inventory.push_str(&patterns_to_jsonl(inv.patterns()));
    inventory.push_str(&patterns_to_jsonl(&inv.higher));
    w.file("patterns.jsonl", &inventory)?;

    let mut r = Table::new(["id", "candidate", "reason"]);
    for x in &inv.filter.rejected {
        r.push([x.cq_id.clone(), x.text.clone(), x.reason.clone()]);
    }
    w.table("rejected_candidates", "Rejected candidates", &r)?;
    w.table("coverage", "Pattern coverage per ontology", &inv.coverage.to_table())?;
    w.table("shared_patterns", "Patterns shared across ontologies", &reuse_table(&inv.reuse_pattern))?;
    w.table("shared_higher_patterns", "Higher-level patterns shared across ontologies", &reuse_table(&inv.reuse_higher))?;
    w.table("avg_cqs_per_pattern", "CQs per pattern", &average_table(&inv.averages_pattern))?;
    w.table("avg_cqs_per_higher_pattern", "CQs per higher-level pattern", &average_table(&inv.averages_higher))
}

fn classify(chunking: &Chunking, features: &[(String, CqFeatures)], w: &mut Writer) -> Result<()> {
    let mut t = Table::new(["id", "ontology", "text", "question_type", "polarity", "modifier", "domain_elements"]);
    for (c, (id, f)) in chunking.cqs.iter().zip(features) {
        debug_assert_eq!(&c.cq_id, id);
        t.push([
            id.clone(),
            c.ontology.clone(),
            c.text.clone(),
            format!("{:?}", f.question_type),
            format!("{:?}", f.polarity),
            format!("{:?}", f.modifier),
            f.dinde.iter().map(|d| format!("{d:?}")).collect::<Vec<_>>().join(" "),
        ]);
    }
    w.table("features", "CQ surface features", &t)
}

fn parse(corpus: &Corpus, q: &QueryAnalysis, w: &mut Writer) -> Result<()> {
    let mut t = Table::new(["id", "ontology", "verb", "distinct", "triples", "query"]);
    let mut jsonl = String::new();
    for cq in &corpus.questions {
        let Some(ast) = q.parsed.get(&cq.id) else { continue };
        let text = serialize_query(ast);
        let triples = ast.flat_triple_count();
        t.push([
            cq.id.clone(),
            cq.ontology.clone(),
            ast.verb.keyword().to_string(),
            ast.distinct.to_string(),
            triples.to_string(),
            text.clone(),
        ]);
        jsonl.push_str(&json!({"id": cq.id, "ontology": cq.ontology, "verb": ast.verb.keyword(), "distinct": ast.distinct, "triples": triples, "query": text}).to_string());
        jsonl.push('\n');
    }
    w.table("queries", "Parsed queries", &t)?;
    w.file("queries.jsonl", &jsonl)?;
    let mut e = Table::new(["id", "error"]);
    for (id, err) in &q.parsed.errors {
        eprintln!("query {id}: {err}");
        e.push([id.clone(), err.to_string()]);
    }
    w.table("parse_errors", "Queries that failed to parse", &e)?;

    let tr = &q.translatability;
    let mut t = Table::new(["ontology", "cqs", "translated", "percent"]);
    for r in tr.rows.iter().chain([&tr.total]) {
        t.push([
            r.ontology.clone(),
            r.cq_count.to_string(),
            r.translated_count.to_string(),
            format!("{:.1}", percent(r.translated_count, r.cq_count)),
        ]);
    }
    w.table("translatability", "Translatability of competency questions", &t)
}

fn keywords(q: &QueryAnalysis, w: &mut Writer) -> Result<()> {
    let k = &q.keywords;
    let mut t = Table::new(["keyword".to_string(), "total".to_string()].into_iter().chain(k.ontologies.iter().cloned()));
    for r in &k.rows {
        let per = k.ontologies.iter().map(|o| r.per_ontology.get(o).copied().unwrap_or(0).to_string());
        t.push([r.keyword.clone(), r.total.to_string()].into_iter().chain(per));
    }
    w.table("keywords", "Keyword usage among queries", &t)
}

fn signatures(q: &QueryAnalysis, w: &mut Writer) -> Result<()> {
    let s = &q.signatures;
    let mut t = Table::new(["id", "count", "cumulative_coverage", "signature", "members"]);
    let mut jsonl = String::new();
    for g in &s.groups {
        t.push([
            g.id.clone(),
            g.count().to_string(),
            format!("{:.1}", g.cumulative_coverage),
            g.signature.to_string(),
            g.members.join(" "),
        ]);
        let line = json!({
            "id": g.id,
            "skeleton": g.signature.skeleton,
            "verb": g.signature.verb.keyword(),
            "distinct": g.signature.distinct,
            "projection": g.signature.projection,
            "members": g.members,
            "count": g.count(),
        });
        jsonl.push_str(&line.to_string());
        jsonl.push('\n');
    }
    w.table("signatures", "Query signatures", &t)?;
    w.file("signatures.jsonl", &jsonl)?;
    let mut k = Table::new(["id", "reason"]);
    for (id, reason) in &s.skipped {
        eprintln!("query {id}: skipped: {reason}");
        k.push([id.clone(), reason.clone()]);
    }
    w.table("signatures_skipped", "Queries left out of signature grouping", &k)
}

fn map(pattern: &Mapping, higher: &Mapping, w: &mut Writer) -> Result<()> {
    w.table("mapping_pattern_edges", "Pattern to signature edges", &pattern.edge_table())?;
    w.table("mapping_pattern_summary", "Pattern to signature mapping", &pattern.summary_table())?;
    w.table("mapping_higher_edges", "Higher-level pattern to signature edges", &higher.edge_table())?;
    w.table("mapping_higher_summary", "Higher-level pattern to signature mapping", &higher.summary_table())
}

fn signals(s: &Signals, w: &mut Writer) -> Result<()> {
    w.table("signals", "Signal rules", &signal_table(&s.mined))?;
    w.table("signal_discovery", "Discovered signal n-grams", &discovery_table(&s.discovered))
}
