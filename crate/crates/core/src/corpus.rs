//! CQ corpus loading, validation and serialization.
//!
//! The canonical format is JSON Lines. Each line is either a question
//!
//! ```text
//! {"id":"awo_6","ontology":"AWO","cq":"Which plants eat animals?","query":"SELECT ...","answers":["..."]}
//! ```
//!
//! or an ontology declaration `{"ontology":"X","prefixes":{"x":"http://..."}}`.
//! The five ontologies of the reference dataset (SWO, Stuff, AWO, DemCare,
//! OntoDT) are known without a declaration; any other ontology must be
//! declared before or after the questions that use it.
//!
//! The `dataset_dir` layout is one folder per ontology:
//!
//! ```text
//! <root>/<folder>/manifest.json     {"ontology": "...", "prefixes": {...}}
//! <root>/<folder>/questions/<id>.txt
//! <root>/<folder>/queries/<id>.rq   (optional, paired by basename)
//! <root>/<folder>/answers/<id>.txt  (optional, one answer per line)
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::queryparse::{parse_query, ParseError, QueryAst};
use crate::vocab::{self, PrefixTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    pub short_name: String,
    pub prefixes: PrefixTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompetencyQuestion {
    pub id: String,
    pub ontology: String,
    pub text: String,
    /// Byte ranges of `[...]` placeholders in `text`, brackets included.
    pub placeholders: Vec<Range<usize>>,
    pub query_text: Option<String>,
    pub expected_answers: Option<Vec<String>>,
}

impl CompetencyQuestion {
    pub fn is_dematerialized(&self) -> bool {
        !self.placeholders.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub ontologies: Vec<Ontology>,
    pub questions: Vec<CompetencyQuestion>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    DatasetDir,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "dataset_dir" | "dataset-dir" => Ok(CorpusFormat::DatasetDir),
            other => Err(format!("unknown corpus format '{other}' (expected jsonl or dataset_dir)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{location}: field '{field}': {message}")]
    Malformed { location: String, field: String, message: String },
    #[error("{location}: duplicate question id '{id}'")]
    DuplicateId { location: String, id: String },
    #[error("{location}: question '{id}' refers to unknown ontology '{ontology}'")]
    UnresolvableOntology { location: String, id: String, ontology: String },
    #[error("{location}: question '{id}': {source}")]
    Brackets { location: String, id: String, source: BracketError },
    #[error("{location}: ontology '{ontology}' declared twice")]
    DuplicateOntology { location: String, ontology: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("unbalanced ']' at byte {0}")]
    UnexpectedClose(usize),
    #[error("unclosed '[' at byte {0}")]
    Unclosed(usize),
    #[error("nested '[' at byte {0}")]
    Nested(usize),
}

/// Finds the `[...]` placeholder spans of a CQ text.
pub fn placeholder_spans(text: &str) -> Result<Vec<Range<usize>>, BracketError> {
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    for (i, c) in text.char_indices() {
        match c {
            '[' if open.is_some() => return Err(BracketError::Nested(i)),
            '[' => open = Some(i),
            ']' => match open.take() {
                Some(start) => spans.push(start..i + 1),
                None => return Err(BracketError::UnexpectedClose(i)),
            },
            _ => {}
        }
    }
    match open {
        Some(start) => Err(BracketError::Unclosed(start)),
        None => Ok(spans),
    }
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    match format {
        CorpusFormat::Jsonl => {
            let text = read(path)?;
            parse_jsonl(&text, &path.display().to_string())
        }
        CorpusFormat::DatasetDir => load_dataset_dir(path),
    }
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

/// Parses JSONL corpus text. `origin` names the source in error locations.
pub fn parse_jsonl(text: &str, origin: &str) -> Result<Corpus, CorpusError> {
    let mut builder = CorpusBuilder::default();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let location = format!("{origin}:{}", n + 1);
        let value: Value = serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
            location: location.clone(),
            field: "<line>".into(),
            message: e.to_string(),
        })?;
        let Value::Object(obj) = value else {
            return Err(malformed(&location, "<line>", "expected a JSON object"));
        };
        if obj.contains_key("prefixes") && !obj.contains_key("id") {
            let (name, prefixes) = manifest_fields(&obj, &location)?;
            builder.declare(name, prefixes, &location)?;
        } else {
            builder.question(question_from_json(&obj, &location)?, location)?;
        }
    }
    builder.finish()
}

fn malformed(location: &str, field: &str, message: &str) -> CorpusError {
    CorpusError::Malformed { location: location.to_string(), field: field.to_string(), message: message.to_string() }
}

fn string_field(obj: &Map<String, Value>, field: &str, location: &str) -> Result<Option<String>, CorpusError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(malformed(location, field, "expected a string")),
    }
}

fn required(obj: &Map<String, Value>, field: &str, location: &str) -> Result<String, CorpusError> {
    match string_field(obj, field, location)? {
        Some(s) if !s.trim().is_empty() => Ok(s),
        Some(_) => Err(malformed(location, field, "must not be empty")),
        None => Err(malformed(location, field, "missing")),
    }
}

fn manifest_fields(obj: &Map<String, Value>, location: &str) -> Result<(String, PrefixTable), CorpusError> {
    let name = required(obj, "ontology", location)?;
    let mut prefixes = PrefixTable::new();
    match obj.get("prefixes") {
        None | Some(Value::Null) => {}
        Some(Value::Object(map)) => {
            for (label, iri) in map {
                let Value::String(iri) = iri else {
                    return Err(malformed(location, &format!("prefixes.{label}"), "expected an IRI string"));
                };
                if !vocab::is_valid_prefix_label(label) {
                    return Err(malformed(location, "prefixes", &format!("invalid prefix label '{label}'")));
                }
                if !vocab::is_absolute_iri(iri) {
                    return Err(malformed(location, &format!("prefixes.{label}"), &format!("not an absolute IRI: '{iri}'")));
                }
                prefixes.insert(label.clone(), iri.clone());
            }
        }
        Some(_) => return Err(malformed(location, "prefixes", "expected an object")),
    }
    Ok((name, prefixes))
}

fn question_from_json(obj: &Map<String, Value>, location: &str) -> Result<CompetencyQuestion, CorpusError> {
    let id = required(obj, "id", location)?;
    let ontology = required(obj, "ontology", location)?;
    let text = required(obj, "cq", location)?;
    let query_text = string_field(obj, "query", location)?.filter(|q| !q.trim().is_empty());
    let expected_answers = match obj.get("answers") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => Some(
            items
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(malformed(location, "answers", "expected an array of strings")),
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Some(_) => return Err(malformed(location, "answers", "expected an array of strings")),
    };
    let placeholders = placeholder_spans(&text).map_err(|source| CorpusError::Brackets {
        location: location.to_string(),
        id: id.clone(),
        source,
    })?;
    Ok(CompetencyQuestion { id, ontology, text, placeholders, query_text, expected_answers })
}

#[derive(Default)]
struct CorpusBuilder {
    declared: BTreeMap<String, PrefixTable>,
    order: Vec<String>,
    questions: Vec<(CompetencyQuestion, String)>,
    ids: HashSet<String>,
}

impl CorpusBuilder {
    fn note(&mut self, name: &str) {
        if !self.order.iter().any(|o| o == name) {
            self.order.push(name.to_string());
        }
    }

    fn declare(&mut self, name: String, prefixes: PrefixTable, location: &str) -> Result<(), CorpusError> {
        if self.declared.contains_key(&name) {
            return Err(CorpusError::DuplicateOntology { location: location.to_string(), ontology: name });
        }
        self.note(&name);
        self.declared.insert(name, prefixes);
        Ok(())
    }

    fn question(&mut self, q: CompetencyQuestion, location: String) -> Result<(), CorpusError> {
        if !self.ids.insert(q.id.clone()) {
            return Err(CorpusError::DuplicateId { location, id: q.id });
        }
        self.note(&q.ontology);
        self.questions.push((q, location));
        Ok(())
    }

    fn finish(self) -> Result<Corpus, CorpusError> {
        for (q, location) in &self.questions {
            if !self.declared.contains_key(&q.ontology) && vocab::builtin_ontology_prefixes(&q.ontology).is_none() {
                return Err(CorpusError::UnresolvableOntology {
                    location: location.clone(),
                    id: q.id.clone(),
                    ontology: q.ontology.clone(),
                });
            }
        }
        let ontologies = self
            .order
            .iter()
            .map(|name| {
                let mut prefixes =
                    vocab::builtin_ontology_prefixes(name).unwrap_or_else(vocab::standard_prefixes);
                if let Some(declared) = self.declared.get(name) {
                    prefixes.extend(declared.iter().map(|(k, v)| (k.clone(), v.clone())));
                }
                Ontology { short_name: name.clone(), prefixes }
            })
            .collect();
        Ok(Corpus { ontologies, questions: self.questions.into_iter().map(|(q, _)| q).collect() })
    }
}

fn load_dataset_dir(root: &Path) -> Result<Corpus, CorpusError> {
    let mut builder = CorpusBuilder::default();
    let mut folders: Vec<PathBuf> = list_dir(root)?.into_iter().filter(|p| p.is_dir()).collect();
    folders.sort();
    for folder in folders {
        let manifest_path = folder.join("manifest.json");
        if !manifest_path.is_file() {
            continue;
        }
        let location = manifest_path.display().to_string();
        let manifest: Value = serde_json::from_str(&read(&manifest_path)?)
            .map_err(|e| malformed(&location, "<file>", &e.to_string()))?;
        let Value::Object(obj) = manifest else {
            return Err(malformed(&location, "<file>", "expected a JSON object"));
        };
        let (ontology, prefixes) = manifest_fields(&obj, &location)?;
        builder.declare(ontology.clone(), prefixes, &location)?;

        let questions_dir = folder.join("questions");
        let mut files: Vec<PathBuf> = if questions_dir.is_dir() { list_dir(&questions_dir)? } else { Vec::new() };
        files.retain(|p| p.extension().is_some_and(|e| e == "txt"));
        files.sort();
        for file in files {
            let id = file.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let location = file.display().to_string();
            let text = read(&file)?.trim().to_string();
            if text.is_empty() {
                return Err(malformed(&location, "cq", "must not be empty"));
            }
            let query_path = folder.join("queries").join(format!("{id}.rq"));
            let query_text = if query_path.is_file() {
                Some(read(&query_path)?).filter(|q| !q.trim().is_empty())
            } else {
                None
            };
            let answers_path = folder.join("answers").join(format!("{id}.txt"));
            let expected_answers = if answers_path.is_file() {
                Some(read(&answers_path)?.lines().filter(|l| !l.trim().is_empty()).map(str::to_string).collect())
            } else {
                None
            };
            let placeholders = placeholder_spans(&text).map_err(|source| CorpusError::Brackets {
                location: location.clone(),
                id: id.clone(),
                source,
            })?;
            let q = CompetencyQuestion { id, ontology: ontology.clone(), text, placeholders, query_text, expected_answers };
            builder.question(q, location)?;
        }
    }
    builder.finish()
}

fn list_dir(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let entries = fs::read_dir(dir).map_err(|source| CorpusError::Io { path: dir.to_path_buf(), source })?;
    entries
        .map(|e| e.map(|e| e.path()).map_err(|source| CorpusError::Io { path: dir.to_path_buf(), source }))
        .collect()
}

impl Corpus {
    pub fn ontology(&self, name: &str) -> Option<&Ontology> {
        self.ontologies.iter().find(|o| o.short_name == name)
    }

    pub fn question(&self, id: &str) -> Option<&CompetencyQuestion> {
        self.questions.iter().find(|q| q.id == id)
    }

    pub fn prefixes_for(&self, q: &CompetencyQuestion) -> PrefixTable {
        self.ontology(&q.ontology).map(|o| o.prefixes.clone()).unwrap_or_else(vocab::standard_prefixes)
    }

    /// Serializes to the JSONL format: ontology declarations first, then
    /// questions in corpus order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for o in &self.ontologies {
            let mut obj = Map::new();
            obj.insert("ontology".into(), Value::String(o.short_name.clone()));
            obj.insert(
                "prefixes".into(),
                Value::Object(o.prefixes.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect()),
            );
            let _ = writeln!(out, "{}", Value::Object(obj));
        }
        for q in &self.questions {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::String(q.id.clone()));
            obj.insert("ontology".into(), Value::String(q.ontology.clone()));
            obj.insert("cq".into(), Value::String(q.text.clone()));
            if let Some(query) = &q.query_text {
                obj.insert("query".into(), Value::String(query.clone()));
            }
            if let Some(answers) = &q.expected_answers {
                obj.insert("answers".into(), Value::Array(answers.iter().cloned().map(Value::String).collect()));
            }
            let _ = writeln!(out, "{}", Value::Object(obj));
        }
        out
    }

    /// Parses every query text with its ontology's prefix table.
    pub fn parse_queries(&self) -> ParsedQueries {
        let mut parsed = ParsedQueries::default();
        for q in &self.questions {
            let Some(text) = &q.query_text else { continue };
            match parse_query(text, &self.prefixes_for(q)) {
                Ok(ast) => {
                    parsed.asts.insert(q.id.clone(), ast);
                }
                Err(e) => parsed.errors.push((q.id.clone(), e)),
            }
        }
        parsed
    }

    /// Ontology names in corpus order, with their questions.
    pub fn by_ontology(&self) -> Vec<(&str, Vec<&CompetencyQuestion>)> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut out: Vec<(&str, Vec<&CompetencyQuestion>)> = Vec::new();
        for o in &self.ontologies {
            index.insert(&o.short_name, out.len());
            out.push((&o.short_name, Vec::new()));
        }
        for q in &self.questions {
            if let Some(&i) = index.get(q.ontology.as_str()) {
                out[i].1.push(q);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedQueries {
    pub asts: BTreeMap<String, QueryAst>,
    pub errors: Vec<(String, ParseError)>,
}

impl ParsedQueries {
    pub fn get(&self, id: &str) -> Option<&QueryAst> {
        self.asts.get(id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslatabilityRow {
    pub ontology: String,
    pub cq_count: usize,
    pub translated_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslatabilityReport {
    /// Sorted by `cq_count`, descending.
    pub rows: Vec<TranslatabilityRow>,
    pub total: TranslatabilityRow,
    /// Questions whose query text is present but does not parse.
    pub unparseable: Vec<(String, String)>,
}

impl TranslatabilityReport {
    pub fn row(&self, ontology: &str) -> Option<&TranslatabilityRow> {
        self.rows.iter().find(|r| r.ontology == ontology)
    }
}

pub fn translatability_report(corpus: &Corpus, parsed: &ParsedQueries) -> TranslatabilityReport {
    let mut rows: Vec<TranslatabilityRow> = corpus
        .by_ontology()
        .into_iter()
        .map(|(name, qs)| TranslatabilityRow {
            ontology: name.to_string(),
            cq_count: qs.len(),
            translated_count: qs.iter().filter(|q| parsed.asts.contains_key(&q.id)).count(),
        })
        .collect();
    rows.sort_by(|a, b| b.cq_count.cmp(&a.cq_count).then_with(|| a.ontology.cmp(&b.ontology)));
    let total = TranslatabilityRow {
        ontology: "Total".into(),
        cq_count: rows.iter().map(|r| r.cq_count).sum(),
        translated_count: rows.iter().map(|r| r.translated_count).sum(),
    };
    let unparseable = parsed.errors.iter().map(|(id, e)| (id.clone(), e.to_string())).collect();
    TranslatabilityReport { rows, total, unparseable }
}
