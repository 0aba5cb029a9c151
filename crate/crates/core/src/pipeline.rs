//! The full analysis over a corpus, stage by stage.

use serde::Serialize;

use crate::corpus::{translatability_report, Corpus, ParsedQueries, TranslatabilityReport};
use crate::correspondence::{
    build_mapping, discover_signals, mine_signals, DiscoveryRow, Mapping, RuleError, SignalRules, SignalRow,
    TranslatedCq, DEFAULT_STOPLIST,
};
use crate::linguistics::{AnnotatedSentence, Chunk, Overrides, TaggerSource, TokenAnnotation, to_pattern_candidate};
use crate::patterns::{
    avg_cqs_per_pattern, classify_cq, comparison_form, coverage_stats, cross_set_reuse, filter_candidates,
    higher_level, normalize_text, AverageRow, Candidate, CoverageTable, CqFeatures, FilterOutcome, Pattern,
    PatternLevel, ReuseRow,
};
use crate::queryparse::{keywords::KeywordReport, KeywordInventory};
use crate::signatures::{group_by_signature, CanonOptions, SignatureGrouping};

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub tagger: TaggerSource,
    pub overrides: Overrides,
    pub canon: CanonOptions,
    pub stoplist: Vec<String>,
    pub min_support: usize,
    pub rules: SignalRules,
    pub keywords: KeywordInventory,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tagger: TaggerSource::Builtin,
            overrides: Overrides::new(),
            canon: CanonOptions::default(),
            stoplist: DEFAULT_STOPLIST.iter().map(|s| s.to_string()).collect(),
            min_support: 2,
            rules: SignalRules::default(),
            keywords: KeywordInventory::default(),
        }
    }
}

/// Chunking result for one CQ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqChunking {
    pub cq_id: String,
    pub ontology: String,
    pub text: String,
    pub dematerialized: bool,
    pub tokens: Vec<TokenAnnotation>,
    pub chunks: Vec<Chunk>,
    /// Candidate text, normalized for sentence-initial case.
    pub candidate: String,
    pub overridden: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Chunking {
    pub cqs: Vec<CqChunking>,
    /// CQs that could not be annotated, with the reason.
    pub errors: Vec<(String, String)>,
}

impl Chunking {
    pub fn candidates(&self) -> Vec<Candidate> {
        self.cqs
            .iter()
            .map(|c| Candidate {
                cq_id: c.cq_id.clone(),
                ontology: c.ontology.clone(),
                dematerialized: c.dematerialized,
                text: c.candidate.clone(),
            })
            .collect()
    }

    pub fn get(&self, cq_id: &str) -> Option<&CqChunking> {
        self.cqs.iter().find(|c| c.cq_id == cq_id)
    }
}

pub fn chunk_corpus(corpus: &Corpus, config: &PipelineConfig) -> Chunking {
    let mut out = Chunking::default();
    for q in &corpus.questions {
        match AnnotatedSentence::build(&q.id, &q.text, &config.tagger) {
            Ok(sentence) => {
                let (candidate, overridden) = match config.overrides.get(&q.id) {
                    Some(fixed) => (fixed.clone(), true),
                    None => (to_pattern_candidate(&sentence), false),
                };
                out.cqs.push(CqChunking {
                    cq_id: q.id.clone(),
                    ontology: q.ontology.clone(),
                    text: q.text.clone(),
                    dematerialized: q.is_dematerialized(),
                    tokens: sentence.tokens,
                    chunks: sentence.chunks,
                    candidate: comparison_form(&candidate),
                    overridden,
                });
            }
            // An override stands in for a missing annotation.
            Err(_) if config.overrides.contains_key(&q.id) => out.cqs.push(CqChunking {
                cq_id: q.id.clone(),
                ontology: q.ontology.clone(),
                text: q.text.clone(),
                dematerialized: q.is_dematerialized(),
                tokens: Vec::new(),
                chunks: Vec::new(),
                candidate: comparison_form(&config.overrides[&q.id]),
                overridden: true,
            }),
            Err(e) => out.errors.push((q.id.clone(), e.to_string())),
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternInventory {
    pub candidates: Vec<Candidate>,
    pub filter: FilterOutcome,
    pub higher: Vec<Pattern>,
    pub coverage: CoverageTable,
    pub reuse_pattern: Vec<ReuseRow>,
    pub reuse_higher: Vec<ReuseRow>,
    pub averages_pattern: Vec<AverageRow>,
    pub averages_higher: Vec<AverageRow>,
}

impl PatternInventory {
    pub fn build(corpus: &Corpus, chunking: &Chunking) -> Self {
        let candidates = chunking.candidates();
        let filter = filter_candidates(&candidates);
        let higher = higher_level(&filter.patterns);
        let names: Vec<String> = corpus.ontologies.iter().map(|o| o.short_name.clone()).collect();
        PatternInventory {
            coverage: coverage_stats(&names, &candidates, &filter.patterns, &higher),
            reuse_pattern: cross_set_reuse(&filter.patterns),
            reuse_higher: cross_set_reuse(&higher),
            averages_pattern: avg_cqs_per_pattern(&names, &candidates, &filter.patterns),
            averages_higher: avg_cqs_per_pattern(&names, &candidates, &higher),
            candidates,
            filter,
            higher,
        }
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.filter.patterns
    }

    /// The accepted pattern text of a CQ at the given level.
    pub fn pattern_of(&self, cq_id: &str, level: PatternLevel) -> Option<String> {
        let p = self.filter.patterns.iter().find(|p| p.support.iter().any(|s| s == cq_id))?;
        Some(match level {
            PatternLevel::Higher => normalize_text(&p.text),
            _ => p.text.clone(),
        })
    }
}

pub fn classify_all(chunking: &Chunking) -> Vec<(String, CqFeatures)> {
    chunking.cqs.iter().map(|c| (c.cq_id.clone(), classify_cq(&c.text, &c.tokens))).collect()
}

/// Query-side analyses: parsing, keywords, signatures.
#[derive(Debug, Clone)]
pub struct QueryAnalysis {
    pub parsed: ParsedQueries,
    pub translatability: TranslatabilityReport,
    pub keywords: KeywordReport,
    pub signatures: SignatureGrouping,
}

impl QueryAnalysis {
    pub fn build(corpus: &Corpus, config: &PipelineConfig) -> Self {
        let parsed = corpus.parse_queries();
        let translatability = translatability_report(corpus, &parsed);
        let ontology_of = |id: &str| corpus.question(id).map(|q| q.ontology.as_str()).unwrap_or("");
        let keywords = config.keywords.report(parsed.asts.iter().map(|(id, ast)| (ontology_of(id), ast)));
        let signatures = group_by_signature(parsed.asts.iter().map(|(id, ast)| (id.as_str(), ast)), config.canon);
        QueryAnalysis { parsed, translatability, keywords, signatures }
    }
}

pub fn translated_cqs(corpus: &Corpus, chunking: &Chunking, queries: &QueryAnalysis) -> Vec<TranslatedCq> {
    corpus
        .questions
        .iter()
        .filter_map(|q| {
            let ast = queries.parsed.get(&q.id)?;
            let pattern = chunking.get(&q.id).map(|c| c.candidate.clone()).unwrap_or_default();
            let sig = queries.signatures.group_of(&q.id).map(|g| (g.id.clone(), g.signature.clone()));
            Some(TranslatedCq::new(&q.id, &q.ontology, &q.text, &pattern, ast, sig))
        })
        .collect()
}

pub fn mappings(inventory: &PatternInventory, translated: &[TranslatedCq]) -> (Mapping, Mapping) {
    let links = |level: PatternLevel| -> Vec<(String, String, String)> {
        translated
            .iter()
            .filter_map(|t| {
                Some((t.cq_id.clone(), inventory.pattern_of(&t.cq_id, level)?, t.signature_id.clone()?))
            })
            .collect()
    };
    let build = |level| {
        let l = links(level);
        build_mapping(l.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())), level)
    };
    (build(PatternLevel::Pattern), build(PatternLevel::Higher))
}

#[derive(Debug, Clone)]
pub struct Signals {
    pub mined: Vec<SignalRow>,
    pub discovered: Vec<DiscoveryRow>,
}

pub fn signals(translated: &[TranslatedCq], config: &PipelineConfig) -> Result<Signals, RuleError> {
    Ok(Signals {
        mined: mine_signals(translated, &config.rules)?,
        discovered: discover_signals(translated, config.min_support, &config.stoplist),
    })
}

/// Every stage, in one pass.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub chunking: Chunking,
    pub inventory: PatternInventory,
    pub features: Vec<(String, CqFeatures)>,
    pub queries: QueryAnalysis,
    pub translated: Vec<TranslatedCq>,
    pub mapping_pattern: Mapping,
    pub mapping_higher: Mapping,
    pub signals: Signals,
}

impl Analysis {
    pub fn run(corpus: &Corpus, config: &PipelineConfig) -> Result<Self, RuleError> {
        let chunking = chunk_corpus(corpus, config);
        let inventory = PatternInventory::build(corpus, &chunking);
        let features = classify_all(&chunking);
        let queries = QueryAnalysis::build(corpus, config);
        let translated = translated_cqs(corpus, &chunking, &queries);
        let (mapping_pattern, mapping_higher) = mappings(&inventory, &translated);
        let signals = signals(&translated, config)?;
        Ok(Analysis { chunking, inventory, features, queries, translated, mapping_pattern, mapping_higher, signals })
    }
}
