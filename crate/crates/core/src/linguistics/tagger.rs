//! Deterministic lexicon and suffix-rule tagger with a shallow dependency
//! layer. It only aims at what chunking needs: POS classes, `aux` links and
//! the heads of prepositions.

use super::tokenize::{tokenize, RawToken};
use super::{Pos, TokenAnnotation};

const WH_PRON: &[&str] = &["what", "which", "who", "whom", "whose"];
const WH_ADV: &[&str] = &["where", "when", "how", "why"];
const BE: &[&str] = &["is", "are", "was", "were", "am", "be", "been", "being", "'s", "'re", "'m"];
/// Tagged AUX when a later verb follows in the same clause, VERB otherwise.
const AUX_CANDIDATES: &[&str] = &[
    "do", "does", "did", "can", "could", "will", "would", "shall", "should", "may", "might", "must", "has",
    "have", "had", "'ve", "'ll", "'d",
];
const HAVE: &[&str] = &["has", "have", "had", "having", "'ve"];
const PRONOUNS: &[&str] = &[
    "i", "we", "you", "he", "she", "it", "they", "me", "us", "them", "there", "something", "anything",
    "anyone", "someone", "everything", "nothing", "itself", "themselves",
];
const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "these", "those", "each", "every", "some", "any", "all", "no", "another",
    "its", "their", "his", "her", "my", "our", "your", "both", "either", "neither", "many", "much", "few",
    "several", "such",
];
const ADPOSITIONS: &[&str] = &[
    "of", "for", "in", "on", "at", "by", "with", "from", "to", "into", "about", "between", "under", "over",
    "through", "during", "without", "within", "like", "regarding", "as", "than", "after", "before", "since",
    "per", "via", "against", "among", "across", "onto", "upon", "towards", "toward", "given", "concerning",
    "including", "around", "behind", "beyond", "near", "out", "up", "off", "down",
];
const CCONJ: &[&str] = &["and", "or", "but", "nor"];
const SCONJ: &[&str] = &["if", "whether", "because", "although", "though", "while", "unless", "whereas"];
const ADVERBS: &[&str] = &[
    "else", "also", "exactly", "only", "currently", "usually", "often", "always", "never", "very", "more",
    "most", "less", "least", "still", "already", "just", "too", "together", "ever", "then", "typically",
    "again", "now", "respectively", "otherwise", "directly", "indirectly", "actually", "generally", "so",
    "approximately", "least", "far", "well",
];
const NUMBER_WORDS: &[&str] = &[
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "hundred", "thousand", "million",
];
const ADJECTIVES: &[&str] = &[
    "main", "possible", "different", "other", "available", "new", "old", "free", "open", "good", "bad",
    "best", "worst", "better", "worse", "valid", "similar", "specific", "current", "same", "own", "typical",
    "general", "relevant", "important", "particular", "large", "small", "big", "high", "low", "long",
    "short", "early", "late", "first", "last", "next", "previous", "real", "true", "false", "common",
    "simple", "complex", "direct", "indirect", "various", "certain", "whole", "full", "empty", "public",
    "private", "major", "minor", "key", "basic", "recent", "latest", "further", "additional", "average",
    "maximum", "minimum", "total", "overall", "mild", "severe", "normal", "abnormal", "wild", "pure",
    "solid", "liquid", "dead", "young", "fast", "slow", "easy", "hard", "human", "female", "male", "elderly",
    "necessary", "sufficient", "numeric", "primitive", "composite", "generic", "discrete", "finite",
    "infinite", "proprietary", "reliable", "daily", "weekly", "monthly", "yearly", "nightly", "unique",
    "specific", "scientific", "academic", "automatic", "semantic", "synthetic", "organic", "electronic",
    "graphic", "dynamic", "static", "basic", "symbolic", "atomic", "periodic", "generic", "strong", "weak",
    "live", "alive", "able", "unable", "whole", "fine", "higher", "lower", "larger", "smaller", "biggest",
    "largest", "smallest", "highest", "lowest", "fastest", "slowest", "newest", "oldest", "nearest",
    "closest", "greatest",
];
/// Words that suffix rules would call adjectives but are nouns.
const NOUN_EXCEPTIONS: &[&str] = &[
    "animal", "animals", "individual", "individuals", "material", "materials", "signal", "signals",
    "interval", "intervals", "journal", "journals", "protocol", "protocols", "terminal", "hospital",
    "manual", "manuals", "potential", "principal", "proposal", "removal", "survival", "trial", "trials",
    "tutorial", "tutorials", "portal", "mineral", "minerals", "capital", "arrival", "approval", "rival",
    "vegetable", "vegetables", "variable", "variables", "table", "tables", "cable", "timetable",
    "archive", "archives", "objective", "objectives", "relative", "relatives", "native", "drive",
    "directive", "alternative", "alternatives", "executive", "initiative", "representative",
    "derivative", "derivatives", "incentive", "perspective", "olive", "sedative", "narrative",
    "chemical", "chemicals", "professional", "professionals", "criminal", "general", "total", "metal",
    "metals", "crystal", "crystals", "medal", "pedal", "goal", "goals", "meal", "meals", "deal", "seal",
    "rental", "referral", "disposal", "festival", "cereal", "cereals", "mammal", "mammals", "petal",
    "petals", "sepal", "tribal", "oval", "local", "stable", "label", "labels", "removal", "dismissal",
    "withdrawal", "appraisal", "renewal", "denial", "burial", "tutorial",
];
/// Base forms of verbs; inflections are derived.
const VERBS: &[&str] = &[
    "eat", "drink", "create", "provide", "produce", "require", "run", "use", "read", "write", "support",
    "implement", "measure", "need", "know", "get", "find", "make", "cite", "develop", "publish", "depend",
    "contain", "belong", "include", "consist", "compose", "describe", "define", "represent", "perform",
    "execute", "install", "download", "work", "process", "handle", "generate", "convert", "export",
    "import", "accept", "visualize", "visualise", "analyse", "analyze", "compare", "detect", "monitor",
    "record", "report", "show", "indicate", "cause", "affect", "prevent", "treat", "diagnose", "suffer",
    "experience", "help", "assist", "participate", "take", "go", "come", "live", "sleep", "wake", "walk",
    "cook", "prepare", "happen", "occur", "start", "stop", "begin", "finish", "spend", "play", "watch",
    "talk", "speak", "call", "visit", "leave", "enter", "close", "change", "increase", "decrease",
    "improve", "reduce", "categorise", "categorize", "classify", "build", "compile", "license", "release",
    "edit", "view", "display", "store", "save", "load", "link", "connect", "return", "mean", "relate",
    "associate", "apply", "maintain", "fund", "own", "distribute", "sell", "buy", "cost", "pay", "hunt",
    "kill", "chase", "inhabit", "feed", "grow", "bear", "carry", "give", "offer", "deliver", "receive",
    "send", "share", "specify", "identify", "determine", "characterise", "characterize", "assess",
    "evaluate", "estimate", "calculate", "compute", "infer", "derive", "extend", "inherit", "restrict",
    "limit", "allow", "enable", "permit", "rely", "interact", "combine", "mix", "separate", "differ",
    "vary", "tell", "say", "see", "look", "seem", "become", "remain", "stay", "keep", "hold", "put", "set",
    "let", "try", "want", "prefer", "choose", "select", "decide", "expect", "hope", "wish", "think",
    "believe", "consider", "understand", "learn", "teach", "study", "test", "check", "verify", "validate",
    "ensure", "avoid", "fail", "succeed", "solve", "fix", "answer", "ask", "search", "query", "retrieve",
    "obtain", "acquire", "collect", "gather", "aggregate", "fit", "suit", "match", "exist", "do", "prey",
    "output", "input", "plan", "list", "design", "control", "result", "type", "name", "drive", "attend",
    "complain", "forget", "remember", "wear", "dress", "wash", "shower", "bathe", "exercise", "lose",
    "gain", "decline", "encode", "decode", "parse", "render", "annotate", "map", "integrate", "host",
    "document", "deprecate", "replace", "update", "upgrade", "access", "contribute", "author", "cover",
    "involve", "refer", "occupy", "dwell", "migrate", "hibernate", "mate", "breed", "swim", "fly",
];
/// Verbs that are just as often nouns; context decides.
const AMBIGUOUS: &[&str] = &[
    "use", "need", "run", "support", "work", "process", "record", "report", "cause", "change", "answer",
    "test", "release", "license", "plan", "help", "visit", "walk", "sleep", "experience", "output", "input",
    "view", "display", "link", "cost", "study", "search", "query", "match", "fit", "set", "return", "feed",
    "call", "store", "start", "finish", "edit", "measure", "limit", "list", "design", "control", "share",
    "type", "name", "result", "drink", "monitor", "play", "talk", "increase", "decrease", "import",
    "export", "hunt", "prey", "load", "fund", "drive", "exercise", "decline", "map", "host", "document",
    "update", "upgrade", "access", "author", "cover", "mix", "check", "watch", "look", "stay", "dress",
    "shower", "wash", "gain", "mate", "fly", "swim", "bear", "keep", "hold", "offer", "wake", "act",
];
const IRREGULAR: &[(&str, &str)] = &[
    ("ate", "eat"), ("eaten", "eat"), ("made", "make"), ("found", "find"), ("got", "get"),
    ("gotten", "get"), ("known", "know"), ("knew", "know"), ("wrote", "write"), ("written", "write"),
    ("ran", "run"), ("took", "take"), ("taken", "take"), ("gave", "give"), ("given", "give"),
    ("went", "go"), ("gone", "go"), ("came", "come"), ("saw", "see"), ("seen", "see"), ("said", "say"),
    ("told", "tell"), ("kept", "keep"), ("held", "hold"), ("thought", "think"), ("bought", "buy"),
    ("sold", "sell"), ("paid", "pay"), ("spent", "spend"), ("built", "build"), ("sent", "send"),
    ("left", "leave"), ("began", "begin"), ("begun", "begin"), ("chose", "choose"), ("chosen", "choose"),
    ("grew", "grow"), ("grown", "grow"), ("drank", "drink"), ("drunk", "drink"), ("spoke", "speak"),
    ("spoken", "speak"), ("fed", "feed"), ("bore", "bear"), ("borne", "bear"), ("understood", "understand"),
    ("taught", "teach"), ("learnt", "learn"), ("meant", "mean"), ("became", "become"), ("lost", "lose"),
    ("forgot", "forget"), ("forgotten", "forget"), ("wore", "wear"), ("worn", "wear"), ("drove", "drive"),
    ("driven", "drive"), ("swam", "swim"), ("flew", "fly"), ("flown", "fly"), ("woke", "wake"),
    ("woken", "wake"), ("read", "read"), ("set", "set"), ("put", "put"), ("let", "let"), ("cost", "cost"),
    ("run", "run"), ("bred", "breed"),
];
const ADJ_SUFFIXES: &[&str] = &["ous", "ful", "less", "ible", "able", "ical", "ular", "ive", "ish", "ary", "al"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Base,
    ThirdSingular,
    Past,
    Participle,
    Gerund,
}

fn lower(s: &str) -> String {
    s.to_lowercase()
}

fn is(list: &[&str], w: &str) -> bool {
    list.contains(&w)
}

/// Recognizes an inflected form of a known verb.
fn verb_form(w: &str) -> Option<(&'static str, Form)> {
    if let Some(&(form, base)) = IRREGULAR.iter().find(|(f, _)| *f == w) {
        let base = VERBS.iter().find(|v| **v == base)?;
        let kind = if form == *base { Form::Base } else { Form::Participle };
        return Some((base, kind));
    }
    if let Some(v) = VERBS.iter().find(|v| **v == w) {
        return Some((v, Form::Base));
    }
    let mut candidates: Vec<(String, Form)> = Vec::new();
    if let Some(stem) = w.strip_suffix("ies") {
        candidates.push((format!("{stem}y"), Form::ThirdSingular));
    }
    if let Some(stem) = w.strip_suffix("es") {
        candidates.push((stem.to_string(), Form::ThirdSingular));
    }
    if let Some(stem) = w.strip_suffix('s') {
        candidates.push((stem.to_string(), Form::ThirdSingular));
    }
    if let Some(stem) = w.strip_suffix("ied") {
        candidates.push((format!("{stem}y"), Form::Past));
    }
    if let Some(stem) = w.strip_suffix("ed") {
        candidates.push((stem.to_string(), Form::Past));
        candidates.push((format!("{stem}e"), Form::Past));
        if let Some(undoubled) = undouble(stem) {
            candidates.push((undoubled, Form::Past));
        }
    }
    if let Some(stem) = w.strip_suffix('d') {
        candidates.push((stem.to_string(), Form::Past));
    }
    if let Some(stem) = w.strip_suffix("ing") {
        candidates.push((stem.to_string(), Form::Gerund));
        candidates.push((format!("{stem}e"), Form::Gerund));
        if let Some(undoubled) = undouble(stem) {
            candidates.push((undoubled, Form::Gerund));
        }
    }
    candidates
        .into_iter()
        .find_map(|(base, form)| VERBS.iter().find(|v| **v == base).map(|v| (*v, form)))
}

fn undouble(stem: &str) -> Option<String> {
    let b = stem.as_bytes();
    (b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2]).then(|| stem[..stem.len() - 1].to_string())
}

fn looks_adjective(w: &str) -> bool {
    if is(ADJECTIVES, w) {
        return true;
    }
    if is(NOUN_EXCEPTIONS, w) || w.len() < 6 {
        return false;
    }
    ADJ_SUFFIXES.iter().any(|s| w.ends_with(s))
}

/// First-pass class of a word, before context is considered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lex {
    Fixed(Pos),
    Be,
    AuxCandidate,
    Verb { form: Form, ambiguous: bool },
    Unknown,
}

fn lexical_class(tok: &RawToken, initial: bool) -> Lex {
    if tok.placeholder {
        return Lex::Fixed(Pos::Noun);
    }
    let s = tok.surface.as_str();
    let w = lower(s);
    let w = w.as_str();
    if s.chars().all(|c| !c.is_alphanumeric()) {
        return Lex::Fixed(Pos::Punct);
    }
    if s.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') || is(NUMBER_WORDS, w) {
        return Lex::Fixed(Pos::Num);
    }
    if is(WH_PRON, w) || is(PRONOUNS, w) {
        return Lex::Fixed(Pos::Pron);
    }
    if is(WH_ADV, w) || is(ADVERBS, w) {
        return Lex::Fixed(Pos::Adv);
    }
    if is(BE, w) {
        return Lex::Be;
    }
    if is(AUX_CANDIDATES, w) {
        return Lex::AuxCandidate;
    }
    if w == "not" || w == "n't" {
        return Lex::Fixed(Pos::Part);
    }
    if is(DETERMINERS, w) {
        return Lex::Fixed(Pos::Det);
    }
    if is(CCONJ, w) {
        return Lex::Fixed(Pos::Cconj);
    }
    if is(SCONJ, w) {
        return Lex::Fixed(Pos::Sconj);
    }
    if is(ADPOSITIONS, w) || w == "that" {
        // "that" and "to" are settled in context
        return Lex::Fixed(if w == "that" { Pos::Pron } else { Pos::Adp });
    }
    if is(ADJECTIVES, w) {
        return Lex::Fixed(Pos::Adj);
    }
    if let Some((base, form)) = verb_form(w) {
        return Lex::Verb { form, ambiguous: is(AMBIGUOUS, base) };
    }
    if looks_adjective(w) {
        return Lex::Fixed(Pos::Adj);
    }
    let _ = initial;
    Lex::Unknown
}

fn is_nominal(p: Pos) -> bool {
    matches!(p, Pos::Noun | Pos::Propn | Pos::Pron)
}

/// Tags CQ text with the built-in rules.
pub fn tag(text: &str) -> Vec<TokenAnnotation> {
    let raw = tokenize(text);
    let lex: Vec<Lex> = raw.iter().enumerate().map(|(i, t)| lexical_class(t, i == 0)).collect();
    let lowers: Vec<String> = raw.iter().map(|t| lower(&t.surface)).collect();
    let mut pos: Vec<Pos> = vec![Pos::X; raw.len()];

    for i in 0..raw.len() {
        let prev = if i > 0 { Some(pos[i - 1]) } else { None };
        let prev_word = if i > 0 { lowers[i - 1].as_str() } else { "" };
        let next_lex = lex.get(i + 1).copied();
        pos[i] = match lex[i] {
            Lex::Fixed(p) => p,
            Lex::Be | Lex::AuxCandidate => Pos::Aux, // settled below
            Lex::Verb { form, ambiguous } => {
                let after_modifier = matches!(prev, Some(Pos::Det | Pos::Adj | Pos::Num))
                    || (matches!(prev, Some(Pos::Adp)) && prev_word != "to")
                    || prev_word == "'s";
                let before = if i > 1 { Some(pos[i - 2]) } else { None };
                let coordinated = prev == Some(Pos::Cconj);
                // "food and drink preparation"
                let compound = coordinated
                    && before.is_some_and(is_nominal)
                    && matches!(next_lex, Some(Lex::Unknown | Lex::Fixed(Pos::Noun)));
                let nounish_context = ambiguous
                    && (is(WH_PRON, prev_word)
                        || compound
                        || matches!(next_lex, Some(Lex::Be | Lex::AuxCandidate)));
                match form {
                    Form::Past | Form::Participle if after_modifier => Pos::Adj,
                    // "the named and published algorithms"
                    Form::Past | Form::Participle if coordinated && before == Some(Pos::Adj) => Pos::Adj,
                    Form::Gerund if !matches!(prev, Some(Pos::Aux | Pos::Pron | Pos::Adv | Pos::Part) | None) => Pos::Noun,
                    _ if after_modifier || nounish_context => Pos::Noun,
                    _ => Pos::Verb,
                }
            }
            Lex::Unknown => {
                let s = &raw[i].surface;
                let w = lowers[i].as_str();
                if w.ends_with("ed") && w.len() > 4 {
                    if matches!(prev, Some(Pos::Det | Pos::Adj)) {
                        Pos::Adj
                    } else {
                        Pos::Verb
                    }
                } else if i > 0 && s.chars().next().is_some_and(char::is_uppercase) {
                    Pos::Propn
                } else if s.len() >= 2 && s.chars().all(|c| c.is_uppercase() || c.is_ascii_digit()) {
                    Pos::Propn
                } else {
                    Pos::Noun
                }
            }
        };
    }

    // "to" before a verb is an infinitive marker; "that" before a noun
    // phrase is a determiner.
    for i in 0..raw.len() {
        let next = pos.get(i + 1).copied();
        if lowers[i] == "to" && next == Some(Pos::Verb) && matches!(lex[i + 1], Lex::Verb { form: Form::Base, .. }) {
            pos[i] = Pos::Part;
        }
        if lowers[i] == "that" && matches!(next, Some(Pos::Noun | Pos::Adj | Pos::Propn)) && !raw[i + 1].placeholder {
            pos[i] = Pos::Det;
        }
    }

    // Auxiliary candidates: AUX when a verb follows in the same clause.
    // Right to left, so "does ... have" sees "have" already settled.
    for i in (0..raw.len()).rev() {
        let clitic = lowers[i].starts_with('\'');
        if matches!(lex[i], Lex::AuxCandidate | Lex::Be) && !clitic {
            pos[i] = if clause_verb_after(&pos, &lowers, i).is_some() { Pos::Aux } else { Pos::Verb };
        }
    }

    let heads = dependencies(&pos, &lowers, &lex);
    raw.into_iter()
        .zip(pos)
        .zip(heads)
        .enumerate()
        .map(|(index, ((t, pos), (head, deprel)))| TokenAnnotation { index, surface: t.surface, pos, head, deprel })
        .collect()
}

fn clause_boundary(pos: &[Pos], lowers: &[String], j: usize) -> bool {
    let w = lowers[j].as_str();
    (is(WH_PRON, w) || is(WH_ADV, w))
        || w == ","
        || pos[j] == Pos::Sconj
        || (w == "that" && pos[j] == Pos::Pron)
        || (pos[j] == Pos::Cconj
            && lowers.get(j + 1).is_some_and(|n| is(WH_PRON, n) || is(WH_ADV, n)))
}

fn clause_verb_after(pos: &[Pos], lowers: &[String], i: usize) -> Option<usize> {
    for j in i + 1..pos.len() {
        if clause_boundary(pos, lowers, j) {
            return None;
        }
        if pos[j] == Pos::Verb {
            return Some(j);
        }
    }
    None
}

fn dependencies(pos: &[Pos], lowers: &[String], lex: &[Lex]) -> Vec<(usize, String)> {
    let n = pos.len();
    if n == 0 {
        return Vec::new();
    }
    let root = (0..n)
        .find(|&i| pos[i] == Pos::Verb)
        .or_else(|| (0..n).find(|&i| pos[i] == Pos::Aux))
        .or_else(|| (0..n).find(|&i| matches!(pos[i], Pos::Noun | Pos::Propn)))
        .unwrap_or(0);
    let mut out: Vec<(usize, String)> = vec![(root, "dep".to_string()); n];
    out[root] = (root, "ROOT".to_string());
    for i in 0..n {
        if i == root {
            continue;
        }
        match pos[i] {
            Pos::Aux => {
                if let Some(v) = clause_verb_after(pos, lowers, i) {
                    let passive = is(BE, &lowers[i])
                        && matches!(lex[v], Lex::Verb { form: Form::Past | Form::Participle, .. } | Lex::Unknown);
                    out[i] = (v, if passive { "auxpass" } else { "aux" }.to_string());
                } else {
                    out[i] = (root, "cop".to_string());
                }
            }
            Pos::Adp => {
                if i > 0 && matches!(pos[i - 1], Pos::Verb) {
                    out[i] = (i - 1, "prep".to_string());
                } else if let Some(h) = (0..i).rev().find(|&j| is_nominal(pos[j])) {
                    out[i] = (h, "prep".to_string());
                } else {
                    out[i] = (root, "prep".to_string());
                }
            }
            Pos::Det | Pos::Adj | Pos::Num => {
                if let Some(h) = (i + 1..n.min(i + 5)).find(|&j| matches!(pos[j], Pos::Noun | Pos::Propn)) {
                    let rel = match pos[i] {
                        Pos::Det => "det",
                        Pos::Adj => "amod",
                        _ => "nummod",
                    };
                    out[i] = (h, rel.to_string());
                }
            }
            Pos::Punct => out[i] = (root, "punct".to_string()),
            _ => {}
        }
    }
    out
}

pub(crate) fn is_have(word: &str) -> bool {
    is(HAVE, &lower(word))
}

pub(crate) fn is_be(word: &str) -> bool {
    is(BE, &lower(word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(s: &str) -> Vec<(String, Pos)> {
        tag(s).into_iter().map(|t| (t.surface, t.pos)).collect()
    }

    fn pos_of(s: &str) -> Vec<Pos> {
        tag(s).into_iter().map(|t| t.pos).collect()
    }

    #[test]
    fn awo_6() {
        use Pos::*;
        let t = tag("Which plants eat animals?");
        assert_eq!(t.iter().map(|t| t.pos).collect::<Vec<_>>(), [Pron, Noun, Verb, Noun, Punct]);
        assert_eq!(t[2].head, 2);
        assert_eq!(t.iter().filter(|t| t.head == t.index).count(), 1);
    }

    #[test]
    fn awo_4_auxiliary() {
        let t = tag("Does a lion eat plants or plant parts?");
        assert_eq!(t[0].pos, Pos::Aux);
        assert_eq!(t[0].deprel, "aux");
        assert_eq!(t[0].head, 3);
        assert_eq!(t[3].pos, Pos::Verb);
        assert_eq!(t[5].pos, Pos::Cconj);
        assert_eq!(t[6].pos, Pos::Noun);
    }

    #[test]
    fn aux_candidates_without_later_verb_are_verbs() {
        let t = tags("Which software has a GUI?");
        assert_eq!(t[2].1, Pos::Verb);
        let t = tags("What EC does [this software] have, and what is its licence?");
        assert_eq!(t[2].1, Pos::Aux);
        assert_eq!(t[4].1, Pos::Verb);
    }

    #[test]
    fn copula_without_later_verb_is_a_verb() {
        let t = tags("Which plants are animals?");
        assert_eq!(t[2].1, Pos::Verb);
    }

    #[test]
    fn passive_be_is_not_an_aux_link() {
        let t = tag("What is [the software] used for?");
        assert_eq!(t[1].pos, Pos::Aux);
        assert_eq!(t[1].deprel, "auxpass");
        assert_eq!(t[4].head, 3);
    }

    #[test]
    fn measured_for() {
        use Pos::*;
        let p = pos_of("What data are measured for neuromuscular impairment in speech production mechanism?");
        assert_eq!(p, [Pron, Noun, Aux, Verb, Adp, Adj, Noun, Adp, Noun, Noun, Noun, Punct]);
    }

    #[test]
    fn ambiguous_nouns_in_context() {
        let t = tags("What file formats does [this software] support?");
        assert_eq!(t[1].1, Pos::Noun);
        assert_eq!(t[2].1, Pos::Noun);
        assert_eq!(t[5].1, Pos::Verb);
        let t = tags("Does [this software] provide XML editing?");
        assert_eq!(t[2].1, Pos::Verb);
        assert_eq!(t[3].1, Pos::Propn);
        assert_eq!(t[4].1, Pos::Noun);
    }

    #[test]
    fn infinitive_to() {
        let t = tags("Which tool can I use to edit [this file]?");
        assert_eq!(t[5].1, Pos::Part);
        assert_eq!(t[6].1, Pos::Verb);
    }

    #[test]
    fn where_s() {
        let t = tags("Where's the manual of [X]?");
        assert_eq!(t[0].1, Pos::Adv);
        assert_eq!(t[1], ("'s".to_string(), Pos::Aux));
        assert_eq!(t[3].1, Pos::Noun);
    }
}
