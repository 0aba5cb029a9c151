//! Token annotation, chunk identification and pattern-candidate strings.

mod chunker;
mod conllu;
mod tagger;
mod tokenize;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use chunker::identify_chunks;
pub use conllu::{parse_conllu, ConlluBank, ConlluSentence};
pub use tokenize::{tokenize, RawToken};

/// Coarse universal POS classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Propn,
    Verb,
    Aux,
    Adj,
    Det,
    Adp,
    Pron,
    Adv,
    Num,
    Punct,
    Cconj,
    Sconj,
    Part,
    X,
}

impl Pos {
    pub const ALL: [Pos; 15] = [
        Pos::Noun, Pos::Propn, Pos::Verb, Pos::Aux, Pos::Adj, Pos::Det, Pos::Adp, Pos::Pron, Pos::Adv,
        Pos::Num, Pos::Punct, Pos::Cconj, Pos::Sconj, Pos::Part, Pos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Propn => "PROPN",
            Pos::Verb => "VERB",
            Pos::Aux => "AUX",
            Pos::Adj => "ADJ",
            Pos::Det => "DET",
            Pos::Adp => "ADP",
            Pos::Pron => "PRON",
            Pos::Adv => "ADV",
            Pos::Num => "NUM",
            Pos::Punct => "PUNCT",
            Pos::Cconj => "CCONJ",
            Pos::Sconj => "SCONJ",
            Pos::Part => "PART",
            Pos::X => "X",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = std::convert::Infallible;

    /// Maps UPOS tags; tags outside the coarse set (INTJ, SYM, ...) become X.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Pos::ALL.into_iter().find(|p| p.as_str() == s).unwrap_or(Pos::X))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenAnnotation {
    pub index: usize,
    pub surface: String,
    pub pos: Pos,
    /// Index of the head token; equal to `index` for the root.
    pub head: usize,
    pub deprel: String,
}

impl TokenAnnotation {
    pub fn is_placeholder(&self) -> bool {
        self.surface.len() >= 2 && self.surface.starts_with('[') && self.surface.ends_with(']')
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChunkKind {
    #[serde(rename = "EC")]
    Entity,
    #[serde(rename = "PC")]
    Predicate,
}

impl ChunkKind {
    pub fn label(self) -> &'static str {
        match self {
            ChunkKind::Entity => "EC",
            ChunkKind::Predicate => "PC",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub kind: ChunkKind,
    /// Token index ranges, ascending. Entity chunks have exactly one.
    pub spans: Vec<Range<usize>>,
    pub ordinal: usize,
    pub surface_text: String,
}

impl Chunk {
    pub fn slot(&self) -> String {
        format!("{}{}", self.kind.label(), self.ordinal)
    }

    pub fn contains(&self, token: usize) -> bool {
        self.spans.iter().any(|s| s.contains(&token))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub cq_id: String,
    pub tokens: Vec<TokenAnnotation>,
    pub chunks: Vec<Chunk>,
}

impl AnnotatedSentence {
    /// Annotates and chunks `text`.
    pub fn build(cq_id: &str, text: &str, source: &TaggerSource) -> Result<Self, AnnotateError> {
        let tokens = annotate(text, source)?;
        let chunks = identify_chunks(&tokens);
        Ok(AnnotatedSentence { cq_id: cq_id.to_string(), tokens, chunks })
    }
}

/// Where token annotations come from.
#[derive(Debug, Clone, Default)]
pub enum TaggerSource {
    #[default]
    Builtin,
    Conllu(ConlluBank),
}

impl TaggerSource {
    pub fn name(&self) -> &'static str {
        match self {
            TaggerSource::Builtin => "builtin",
            TaggerSource::Conllu(_) => "conllu",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AnnotateError {
    #[error("empty CQ text")]
    Empty,
    #[error("no CoNLL-U sentence matches {0:?}")]
    ConlluMismatch(String),
    #[error("CoNLL-U {location}: {message}")]
    Conllu { location: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Tokenizes, tags and parses `text`.
pub fn annotate(text: &str, source: &TaggerSource) -> Result<Vec<TokenAnnotation>, AnnotateError> {
    if text.trim().is_empty() {
        return Err(AnnotateError::Empty);
    }
    match source {
        TaggerSource::Builtin => Ok(tagger::tag(text)),
        TaggerSource::Conllu(bank) => bank
            .lookup(text)
            .map(|s| s.tokens.clone())
            .ok_or_else(|| AnnotateError::ConlluMismatch(text.to_string())),
    }
}

/// Replaces every chunk with its slot name; a discontinuous PC yields the
/// same slot for each fragment. The final "?" is dropped.
pub fn to_pattern_candidate(sentence: &AnnotatedSentence) -> String {
    let tokens = &sentence.tokens;
    let mut end = tokens.len();
    while end > 0 && matches!(tokens[end - 1].surface.as_str(), "?" | "." | "!") {
        end -= 1;
    }
    let mut pieces: Vec<String> = Vec::new();
    let mut i = 0;
    while i < end {
        if let Some((chunk, span)) = sentence
            .chunks
            .iter()
            .find_map(|c| c.spans.iter().find(|s| s.start == i).map(|s| (c, s)))
        {
            pieces.push(chunk.slot());
            i = span.end;
            continue;
        }
        let s = tokens[i].surface.as_str();
        if !matches!(s, "\"" | "“" | "”" | "‘") {
            let attach = matches!(s, "," | ";" | ":" | "'s" | "n't" | "'re" | "'ve" | "'ll" | "'m" | "'d" | ")");
            match pieces.last_mut() {
                Some(last) if attach => last.push_str(s),
                _ => pieces.push(s.to_string()),
            }
        }
        i += 1;
    }
    pieces.join(" ")
}

/// Per-CQ manual pattern corrections (`{"id": "pattern text"}`).
pub type Overrides = BTreeMap<String, String>;

pub fn load_overrides(path: &Path) -> Result<Overrides, OverrideError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Debug, thiserror::Error)]
pub enum OverrideError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("override file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Candidate string for one CQ, honouring overrides.
pub fn candidate_for(
    cq_id: &str,
    text: &str,
    source: &TaggerSource,
    overrides: &Overrides,
) -> Result<String, AnnotateError> {
    if let Some(fixed) = overrides.get(cq_id) {
        return Ok(fixed.clone());
    }
    Ok(to_pattern_candidate(&AnnotatedSentence::build(cq_id, text, source)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn candidate(text: &str) -> String {
        to_pattern_candidate(&AnnotatedSentence::build("t", text, &TaggerSource::Builtin).unwrap())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(candidate("Which plants eat animals?"), "Which EC1 PC1 EC2");
        assert_eq!(candidate("Does a lion eat plants or plant parts?"), "PC1 EC1 PC1 EC2 or EC3");
        assert_eq!(
            candidate("What data are measured for neuromuscular impairment in speech production mechanism?"),
            "What EC1 PC1 EC2 in EC3"
        );
    }

    #[test]
    fn software_questions() {
        assert_eq!(candidate("What file formats does [this software] support?"), "What EC1 PC1 EC2 PC1");
        assert_eq!(candidate("Does [this software] provide XML editing?"), "PC1 EC1 PC1 EC2");
        assert_eq!(candidate("Does [this software] have a GUI?"), "Does EC1 have EC2");
        assert_eq!(candidate("What licence does [this software] have?"), "What EC1 does EC2 have");
        assert_eq!(candidate("What is [this software] used for?"), "What is EC1 PC1");
    }

    #[test]
    fn copulas_stay_literal() {
        assert_eq!(candidate("Which plants are animals?"), "Which EC1 are EC2");
        assert_eq!(candidate("What is the license of [this software]?"), "What is EC1 of EC2");
        assert_eq!(candidate("Is there a GUI?"), "Is there EC1");
        assert_eq!(candidate("Where's the manual of [X]?"), "Where's EC1 of EC2");
    }

    #[test]
    fn single_placeholder() {
        assert_eq!(candidate("[X]?"), "EC1");
    }

    #[test]
    fn meta_nouns_and_numbers_stay_literal() {
        assert_eq!(candidate("What type of food is [X]?"), "What type of EC1 is EC2");
        assert_eq!(candidate("Which animals eat exactly 3 plants?"), "Which EC1 PC1 exactly 3 EC2");
        assert_eq!(candidate("What are the possible types of [X]?"), "What are the possible types of EC1");
    }

    #[test]
    fn pronoun_i_is_literal() {
        assert_eq!(candidate("What software can I use with [X]?"), "What EC1 PC1 I PC1 EC2");
    }

    #[test]
    fn empty_text_is_an_error() {
        assert!(matches!(annotate("  ", &TaggerSource::Builtin), Err(AnnotateError::Empty)));
    }

    #[test]
    fn pos_round_trips_through_upos() {
        for p in Pos::ALL {
            assert_eq!(p.as_str().parse::<Pos>().unwrap(), p);
        }
        assert_eq!("INTJ".parse::<Pos>().unwrap(), Pos::X);
    }
}
