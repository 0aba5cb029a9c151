//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Criteria 1 to 5 and 6b need the published CQ dataset. Point `CQ_DATASET`
//! at it (`CQ_DATASET_FORMAT` is `jsonl` or `dataset_dir`); without it those
//! criteria FAIL as unavailable. The remaining criteria are self-contained.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use common::*;
use cqscope::calibration::{self as paper, display_name};
use cqscope::corpus::{load_corpus, Corpus, CorpusFormat};
use cqscope::linguistics::{to_pattern_candidate, AnnotatedSentence, TaggerSource};
use cqscope::patterns::{filter_candidates, normalize_text};
use cqscope::pipeline::{Analysis, PipelineConfig, QueryAnalysis};
use cqscope::queryparse::{parse_query, serialize_query};
use cqscope::signatures::canonicalize;

const KEYWORD_ROWS_EXACT_MIN: usize = 18;
const VERB_RULE_SLACK: usize = 2;
const SIGNATURE_RANGE: (usize, usize) = (40, 55);
const TOP9_SLACK_POINTS: f64 = 8.0;
const PATTERN_REL_TOL: f64 = 0.15;
const PATTERNS_TARGET: f64 = 106.0;
const HIGHER_TARGET: f64 = 81.0;

const INVARIANCE_TRIALS: usize = 1000;
const INVARIANCE_MAX_TRIPLES: usize = 8;
const ORACLE_TRIALS: usize = 1000;
const ORACLE_MAX_TRIPLES: usize = 4;
const NORMALIZE_TRIALS: usize = 1000;
const FILTER_TRIALS: usize = 500;
const FILTER_MAX_CQS: usize = 50;

type Outcome = Result<String, String>;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, name: &str, outcome: Outcome) {
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL {id} {name}: {detail}");
            }
        }
    }
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn dataset() -> Result<Corpus, String> {
    let mut path = std::env::var_os("CQ_DATASET")
        .map(PathBuf::from)
        .unwrap_or_else(|| workspace_root().join("data/published/corpus.jsonl"));
    // cargo runs tests from the crate directory
    if path.is_relative() && !path.exists() {
        path = workspace_root().join(path);
    }
    let format: CorpusFormat = std::env::var("CQ_DATASET_FORMAT").unwrap_or_else(|_| "jsonl".into()).parse()?;
    if !path.exists() {
        return Err(format!("dataset unavailable ({} not found; set CQ_DATASET)", path.display()));
    }
    load_corpus(&path, format).map_err(|e| format!("dataset unavailable ({e})"))
}

// ---------------------------------------------------------------------------
// dataset criteria

fn translatability(q: &QueryAnalysis) -> Outcome {
    let tr = &q.translatability;
    let mut bad = Vec::new();
    let total = (tr.total.cq_count, tr.total.translated_count);
    if total != (paper::TOTAL_CQS, paper::TOTAL_TRANSLATED) {
        bad.push(format!("total {total:?} vs ({}, {})", paper::TOTAL_CQS, paper::TOTAL_TRANSLATED));
    }
    for (o, cqs, translated) in paper::TRANSLATABILITY {
        let got = tr.row(o).map_or((0, 0), |r| (r.cq_count, r.translated_count));
        if got != (cqs, translated) {
            bad.push(format!("{} {got:?} vs ({cqs}, {translated})", display_name(o)));
        }
    }
    if bad.is_empty() {
        Ok(format!("total {total:?} and all 5 ontology rows exact"))
    } else {
        Err(bad.join("; "))
    }
}

fn keywords(q: &QueryAnalysis) -> Outcome {
    let mut exact = 0;
    let mut traces = Vec::new();
    for (label, total, per) in paper::KEYWORDS {
        let row = q.keywords.row(label);
        let got_total = row.map_or(0, |r| r.total);
        let mut diffs = Vec::new();
        if got_total != total {
            diffs.push(format!("total {got_total} vs {total}"));
        }
        let expected: BTreeMap<&str, usize> = per.iter().copied().collect();
        let onts: std::collections::BTreeSet<&str> =
            expected.keys().copied().chain(row.into_iter().flat_map(|r| r.per_ontology.keys().map(String::as_str))).collect();
        for o in onts {
            let got = row.and_then(|r| r.per_ontology.get(o)).copied().unwrap_or(0);
            let want = expected.get(o).copied().unwrap_or(0);
            if got != want {
                diffs.push(format!("{} {got} vs {want}", display_name(o)));
            }
        }
        if diffs.is_empty() {
            exact += 1;
        } else {
            traces.push(format!("{label}: {}", diffs.join(", ")));
        }
    }
    let detail = format!("{exact}/21 rows exact (need {KEYWORD_ROWS_EXACT_MIN})");
    let detail = if traces.is_empty() { detail } else { format!("{detail}; deviations: {}", traces.join(" | ")) };
    if exact >= KEYWORD_ROWS_EXACT_MIN {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn signal_verbs(a: &Analysis) -> Outcome {
    let row = |id: &str| a.signals.mined.iter().find(|r| r.rule_id == id).map(|r| (r.numerator, r.denominator));
    let near = |got: (usize, usize), want: (usize, usize)| got.0.abs_diff(want.0) <= VERB_RULE_SLACK && got.1.abs_diff(want.1) <= VERB_RULE_SLACK;
    let checks = [
        ("initial-select", (107, 107), true),
        ("initial-ask", (16, 18), true),
        ("or", (2, 9), false),
        ("and", (2, 11), false),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (id, want, slack) in checks {
        let got = row(id);
        let pass = got.is_some_and(|g| if slack { near(g, want) } else { g == want });
        ok &= pass;
        let shown = got.map_or("missing".to_string(), |g| format!("{}/{}", g.0, g.1));
        parts.push(format!("{id} {shown} (want {}/{}{})", want.0, want.1, if slack { ", ±2" } else { "" }));
    }
    if ok {
        Ok(parts.join("; "))
    } else {
        Err(parts.join("; "))
    }
}

fn parser_totality(corpus: &Corpus, q: &QueryAnalysis) -> Outcome {
    let with_query = corpus.questions.iter().filter(|c| c.query_text.is_some()).count();
    let mut round_trips = 0;
    for c in &corpus.questions {
        let Some(ast) = q.parsed.get(&c.id) else { continue };
        if parse_query(&serialize_query(ast), &corpus.prefixes_for(c)).is_ok_and(|again| &again == ast) {
            round_trips += 1;
        }
    }
    let parsed = q.parsed.asts.len();
    let detail = format!(
        "{parsed}/{with_query} parse, {round_trips}/{parsed} round-trip, {} errors{}",
        q.parsed.errors.len(),
        q.parsed.errors.first().map_or(String::new(), |(id, e)| format!(" (first: {id}: {e})"))
    );
    if with_query == paper::TOTAL_TRANSLATED && parsed == with_query && round_trips == parsed {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn signatures(q: &QueryAnalysis) -> Outcome {
    let s = &q.signatures;
    let count = s.groups.len();
    let top9 = s.top_coverage(9);
    let listed = s.groups.iter().all(|g| g.count() > 0) && s.groups.iter().map(|g| g.count()).sum::<usize>() == s.total;
    let detail = format!(
        "{count} signatures (range {}..={}), top-9 coverage {top9:.1}% (want {:.1} ±{TOP9_SLACK_POINTS}), {} skipped",
        SIGNATURE_RANGE.0,
        SIGNATURE_RANGE.1,
        paper::TOP9_COVERAGE,
        s.skipped.len()
    );
    let pass = (SIGNATURE_RANGE.0..=SIGNATURE_RANGE.1).contains(&count)
        && (top9 - paper::TOP9_COVERAGE).abs() <= TOP9_SLACK_POINTS
        && listed;
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pattern_inventory(a: &Analysis) -> Outcome {
    let patterns = a.inventory.patterns().len() as f64;
    let higher = a.inventory.higher.len() as f64;
    let within = |x: f64, t: f64| (x - t).abs() <= PATTERN_REL_TOL * t;
    let detail = format!(
        "{patterns} patterns (want {PATTERNS_TARGET} ±15%), {higher} higher-level (want {HIGHER_TARGET} ±15%), {} chunking errors",
        a.chunking.errors.len()
    );
    if within(patterns, PATTERNS_TARGET) && within(higher, HIGHER_TARGET) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------------------
// worked examples

fn worked_examples() -> Outcome {
    let fixtures = load_corpus(&workspace_root().join("data/paper_fixtures.jsonl"), CorpusFormat::Jsonl)
        .map_err(|e| format!("fixtures: {e}"))?;
    let chunk = |id: &str| -> String {
        let q = fixtures.question(id).expect("fixture present");
        AnnotatedSentence::build(id, &q.text, &TaggerSource::Builtin)
            .map(|s| to_pattern_candidate(&s))
            .unwrap_or_else(|e| format!("<{e}>"))
    };
    let family = |members: &[&str], base: &str| -> Result<(), String> {
        let off: Vec<String> =
            members.iter().map(|m| (m, normalize_text(m))).filter(|(_, n)| n != base).map(|(m, n)| format!("{m} -> {n}")).collect();
        if off.is_empty() {
            Ok(())
        } else {
            Err(off.join(", "))
        }
    };
    let equal = |got: String, want: &str| if got == want { Ok(()) } else { Err(format!("got {got:?}, want {want:?}")) };
    let examples: [(&str, Result<(), String>); 8] = [
        ("awo_6", equal(chunk("awo_6"), "Which EC1 PC1 EC2")),
        ("awo_4", equal(chunk("awo_4"), "PC1 EC1 PC1 EC2 or EC3")),
        ("DemCare_CQ_51", equal(chunk("DemCare_CQ_51"), "What EC1 PC1 EC2 in EC3")),
        (
            "Is there EC1 family",
            family(&["Are there EC1 in EC2", "Is there EC1 for EC2", "Is there EC1 with EC2"], "Is there EC1"),
        ),
        (
            "What is EC1 family",
            family(
                &[
                    "What is EC1",
                    "What is EC1 of EC2",
                    "What are EC1",
                    "Which are EC1 of EC2",
                    "What is EC1 of EC2 for EC3",
                    "What are EC1 for EC2",
                    "What is EC1 for EC2",
                ],
                "What is EC1",
            ),
        ),
        ("Are there any EC1 for EC2", equal(normalize_text("Are there any EC1 for EC2"), "Is there EC1")),
        ("What is EC1 of EC2 for EC3", equal(normalize_text("What is EC1 of EC2 for EC3"), "What is EC1")),
        ("What is EC1 fixpoint", equal(normalize_text("What is EC1"), "What is EC1")),
    ];
    let failed: Vec<String> = examples.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    if failed.is_empty() {
        Ok("8/8 worked examples exact".into())
    } else {
        Err(format!("{}/8 exact; {}", 8 - failed.len(), failed.join("; ")))
    }
}

// ---------------------------------------------------------------------------
// property criteria

fn invariance() -> Outcome {
    let mut r = rng(0x5157);
    let mut broken = Vec::new();
    for trial in 0..INVARIANCE_TRIALS {
        let ast = random_query(&mut r, INVARIANCE_MAX_TRIPLES);
        let base = canonicalize(&ast).map_err(|e| format!("trial {trial}: {e}"))?;
        let mut all = ast.clone();
        for (name, f) in TRANSFORMS {
            let moved = f(&ast, &mut r);
            if canonicalize(&moved).ok().as_ref() != Some(&base) {
                broken.push(format!("trial {trial}: {name}"));
            }
            all = f(&all, &mut r);
        }
        if canonicalize(&all).ok().as_ref() != Some(&base) {
            broken.push(format!("trial {trial}: all transformations"));
        }
    }

    let mut off_min = Vec::new();
    for trial in 0..ORACLE_TRIALS {
        let (flat, text) = FlatQuery::random(&mut r, ORACLE_MAX_TRIPLES);
        let ast = parse_query(&text, &prefixes()).map_err(|e| format!("oracle trial {trial}: {e}"))?;
        let got = canonicalize(&ast).map_err(|e| format!("oracle trial {trial}: {e}"))?.skeleton;
        if got != flat.brute_force_skeleton() {
            off_min.push(format!("oracle trial {trial}"));
        }
    }
    let detail = format!(
        "{}/{INVARIANCE_TRIALS} invariance trials identical under 6 transformations; {}/{ORACLE_TRIALS} brute-force minimum matches",
        INVARIANCE_TRIALS - broken.iter().map(|b| b.split(':').next().unwrap_or_default()).collect::<std::collections::BTreeSet<_>>().len(),
        ORACLE_TRIALS - off_min.len()
    );
    if broken.is_empty() && off_min.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; first: {}", broken.iter().chain(&off_min).next().cloned().unwrap_or_default()))
    }
}

fn normalization() -> Outcome {
    let mut r = rng(0x0e0e);
    for trial in 0..NORMALIZE_TRIALS {
        let p = random_pattern(&mut r);
        let once = normalize_text(&p);
        if normalize_text(&once) != once {
            return Err(format!("trial {trial}: not idempotent on {p:?}"));
        }
        let (before, after) = (slot_kinds(&p), slot_kinds(&once));
        let ecs = |k: &[&str]| k.iter().filter(|x| **x == "EC").count();
        if ecs(&after) > ecs(&before) || !is_subsequence(&after, &before) {
            return Err(format!("trial {trial}: slots grew or reordered: {p:?} -> {once:?}"));
        }
    }
    Ok(format!("{NORMALIZE_TRIALS}/{NORMALIZE_TRIALS} idempotent, EC count non-increasing, slot order kept"))
}

fn filtering() -> Outcome {
    let mut r = rng(0xf117);
    for trial in 0..FILTER_TRIALS {
        let n = r.gen_range(0..=FILTER_MAX_CQS);
        let base: Vec<_> = (0..n).map(|i| random_candidate(&mut r, i)).collect();
        let accepted = |cs: &[cqscope::patterns::Candidate]| -> BTreeMap<String, std::collections::BTreeSet<String>> {
            filter_candidates(cs).patterns.into_iter().map(|p| (p.text, p.support.into_iter().collect())).collect()
        };
        let got = accepted(&base);
        if got != brute_force_filter(&base) {
            return Err(format!("trial {trial}: differs from the reference filter"));
        }
        let supported: std::collections::BTreeSet<&String> = got.values().flatten().collect();
        if let Some(c) = base.iter().find(|c| c.dematerialized && !supported.contains(&c.cq_id)) {
            return Err(format!("trial {trial}: dematerialized {} rejected", c.cq_id));
        }
        let extra = r.gen_range(0..=FILTER_MAX_CQS - n);
        let mut grown = base.clone();
        grown.extend((0..extra).map(|i| random_candidate(&mut r, n + i)));
        let more = accepted(&grown);
        if let Some((text, _)) = got.iter().find(|(t, s)| !more.get(*t).is_some_and(|m| m.is_superset(s))) {
            return Err(format!("trial {trial}: adding CQs dropped {text:?}"));
        }
    }
    Ok(format!("{FILTER_TRIALS}/{FILTER_TRIALS} corpora match the reference; monotone; dematerialized CQs always kept"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut report = Report { failures: 0 };
    match dataset() {
        Ok(corpus) => {
            let queries = QueryAnalysis::build(&corpus, &PipelineConfig::default());
            report.line("1", "translatability", translatability(&queries));
            report.line("2", "keyword table", keywords(&queries));
            let analysis = Analysis::run(&corpus, &PipelineConfig::default()).map_err(|e| e.to_string());
            report.line("3", "signal verb rules", analysis.as_ref().map_err(Clone::clone).and_then(signal_verbs));
            report.line("4", "parser totality", parser_totality(&corpus, &queries));
            report.line("5", "signature calibration", signatures(&queries));
            report.line("6a", "worked chunking/normalization examples", worked_examples());
            report.line("6b", "pattern inventory", analysis.as_ref().map_err(Clone::clone).and_then(pattern_inventory));
        }
        Err(why) => {
            for (id, name) in [
                ("1", "translatability"),
                ("2", "keyword table"),
                ("3", "signal verb rules"),
                ("4", "parser totality"),
                ("5", "signature calibration"),
            ] {
                report.line(id, name, Err(why.clone()));
            }
            report.line("6a", "worked chunking/normalization examples", worked_examples());
            report.line("6b", "pattern inventory", Err(why));
        }
    }
    report.line("7", "signature invariance", invariance());
    report.line("8", "normalization properties", normalization());
    report.line("9", "candidate filtering", filtering());
    println!("acceptance: {} failed, {:.1}s", report.failures, start.elapsed().as_secs_f64());
    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
