//! Reading annotations produced by an external parser in CoNLL-U format.

use std::collections::HashMap;
use std::path::Path;

use super::{AnnotateError, Pos, TokenAnnotation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConlluSentence {
    pub text: String,
    pub tokens: Vec<TokenAnnotation>,
}

/// Sentences addressable by their text, whitespace ignored.
#[derive(Debug, Clone, Default)]
pub struct ConlluBank {
    sentences: Vec<ConlluSentence>,
    by_key: HashMap<String, usize>,
}

fn key(text: &str) -> String {
    let mut k: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    k = k.replace('’', "'");
    k
}

impl ConlluBank {
    pub fn new(sentences: Vec<ConlluSentence>) -> Self {
        let mut by_key = HashMap::new();
        for (i, s) in sentences.iter().enumerate() {
            by_key.entry(key(&s.text)).or_insert(i);
        }
        ConlluBank { sentences, by_key }
    }

    /// Loads one `.conllu` file, or every `*.conllu` file in a directory
    /// (in file-name order).
    pub fn load(path: &Path) -> Result<Self, AnnotateError> {
        let mut files = Vec::new();
        if path.is_dir() {
            for entry in std::fs::read_dir(path)? {
                let p = entry?.path();
                if p.extension().is_some_and(|e| e == "conllu") {
                    files.push(p);
                }
            }
            files.sort();
        } else {
            files.push(path.to_path_buf());
        }
        let mut sentences = Vec::new();
        for f in files {
            let text = std::fs::read_to_string(&f)?;
            sentences.extend(parse_conllu(&text, &f.display().to_string())?);
        }
        Ok(ConlluBank::new(sentences))
    }

    pub fn lookup(&self, text: &str) -> Option<&ConlluSentence> {
        self.by_key.get(&key(text)).map(|&i| &self.sentences[i])
    }

    pub fn sentences(&self) -> &[ConlluSentence] {
        &self.sentences
    }
}

struct Row {
    form: String,
    pos: Pos,
    head: usize,
    deprel: String,
}

/// Parses CoNLL-U text. Multiword-token ranges and empty nodes are skipped;
/// bracket tokens enclosing a placeholder are merged into one token.
pub fn parse_conllu(text: &str, origin: &str) -> Result<Vec<ConlluSentence>, AnnotateError> {
    let mut out = Vec::new();
    let mut comment_text: Option<String> = None;
    let mut rows: Vec<Row> = Vec::new();
    let err = |line: usize, message: String| AnnotateError::Conllu { location: format!("{origin}:{line}"), message };
    for (n, line) in text.lines().enumerate().map(|(n, l)| (n + 1, l.trim_end_matches('\r'))) {
        if line.trim().is_empty() {
            if !rows.is_empty() {
                out.push(finish(std::mem::take(&mut rows), comment_text.take()).map_err(|m| err(n, m))?);
            }
            comment_text = None;
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some(t) = c.trim().strip_prefix("text") {
                if let Some(t) = t.trim_start().strip_prefix('=') {
                    comment_text = Some(t.trim().to_string());
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(err(n, format!("expected 10 columns, found {}", cols.len())));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0].parse().map_err(|_| err(n, format!("bad token id {:?}", cols[0])))?;
        if id != rows.len() + 1 {
            return Err(err(n, format!("token id {id} out of sequence")));
        }
        let head: usize = cols[6].parse().map_err(|_| err(n, format!("bad head {:?}", cols[6])))?;
        rows.push(Row {
            form: cols[1].to_string(),
            pos: cols[3].parse().unwrap_or(Pos::X),
            head,
            deprel: cols[7].to_string(),
        });
    }
    if !rows.is_empty() {
        let n = text.lines().count();
        out.push(finish(rows, comment_text).map_err(|m| err(n, m))?);
    }
    Ok(out)
}

fn finish(rows: Vec<Row>, comment_text: Option<String>) -> Result<ConlluSentence, String> {
    let n = rows.len();
    if rows.iter().any(|r| r.head > n) {
        return Err("head index beyond sentence".into());
    }
    let roots = rows.iter().filter(|r| r.head == 0).count();
    if roots != 1 {
        return Err(format!("expected exactly one root, found {roots}"));
    }
    let text = comment_text.unwrap_or_else(|| rows.iter().map(|r| r.form.as_str()).collect::<Vec<_>>().join(" "));

    // Group rows into output tokens: "[" ... "]" collapse into one.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < n {
        if rows[i].form == "[" {
            if let Some(close) = (i + 1..n).find(|&j| rows[j].form == "]") {
                groups.push((i..=close).collect());
                i = close + 1;
                continue;
            }
        }
        groups.push(vec![i]);
        i += 1;
    }
    let mut new_index = vec![0; n];
    for (g, members) in groups.iter().enumerate() {
        for &m in members {
            new_index[m] = g;
        }
    }
    let mut tokens = Vec::with_capacity(groups.len());
    for (g, members) in groups.iter().enumerate() {
        let (surface, rep) = if members.len() > 1 {
            let inner: Vec<&str> = members[1..members.len() - 1].iter().map(|&m| rows[m].form.as_str()).collect();
            // the member whose head lies outside the group represents it
            let rep = members
                .iter()
                .copied()
                .find(|&m| rows[m].head == 0 || !members.contains(&(rows[m].head - 1)))
                .unwrap_or(members[0]);
            (format!("[{}]", inner.join(" ")), rep)
        } else {
            (rows[members[0]].form.clone(), members[0])
        };
        let row = &rows[rep];
        let head = if row.head == 0 { g } else { new_index[row.head - 1] };
        let pos = if members.len() > 1 { Pos::Noun } else { row.pos };
        let deprel = if row.head == 0 { "ROOT".to_string() } else { row.deprel.clone() };
        tokens.push(TokenAnnotation { index: g, surface, pos, head, deprel });
    }
    Ok(ConlluSentence { text, tokens })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# sent_id = awo_4
# text = Does a lion eat plants or plant parts?
1\tDoes\tdo\tAUX\t_\t_\t4\taux\t_\t_
2\ta\ta\tDET\t_\t_\t3\tdet\t_\t_
3\tlion\tlion\tNOUN\t_\t_\t4\tnsubj\t_\t_
4\teat\teat\tVERB\t_\t_\t0\troot\t_\t_
5\tplants\tplant\tNOUN\t_\t_\t4\tobj\t_\t_
6\tor\tor\tCCONJ\t_\t_\t8\tcc\t_\t_
7\tplant\tplant\tNOUN\t_\t_\t8\tcompound\t_\t_
8\tparts\tpart\tNOUN\t_\t_\t5\tconj\t_\t_
9\t?\t?\tPUNCT\t_\t_\t4\tpunct\t_\t_

1\tDoes\tdo\tAUX\t_\t_\t6\taux\t_\t_
2\t[\t[\tPUNCT\t_\t_\t4\tpunct\t_\t_
3\tthis\tthis\tDET\t_\t_\t4\tdet\t_\t_
4\tsoftware\tsoftware\tNOUN\t_\t_\t5\tnsubj\t_\t_
5\t]\t]\tPUNCT\t_\t_\t6\tpunct\t_\t_
6\thave\thave\tVERB\t_\t_\t0\troot\t_\t_
7-8\tGUIs\t_\t_\t_\t_\t_\t_\t_\t_
7\tGUI\tGUI\tNOUN\t_\t_\t6\tobj\t_\t_
8\ts\ts\tX\t_\t_\t7\tdep\t_\t_
";

    #[test]
    fn reads_sentences_and_heads() {
        let s = parse_conllu(SAMPLE, "mem").unwrap();
        assert_eq!(s.len(), 2);
        let t = &s[0].tokens;
        assert_eq!(t[0].pos, Pos::Aux);
        assert_eq!(t[0].head, 3);
        assert_eq!(t[0].deprel, "aux");
        assert_eq!(t[3].head, 3);
    }

    #[test]
    fn merges_placeholder_brackets() {
        let s = parse_conllu(SAMPLE, "mem").unwrap();
        let t = &s[1].tokens;
        assert_eq!(t[1].surface, "[this software]");
        assert_eq!(t[1].pos, Pos::Noun);
        assert_eq!(t[1].head, 2);
        assert_eq!(t[0].head, 2);
        assert_eq!(t.len(), 5);
        assert_eq!(t[2].index, 2);
    }

    #[test]
    fn lookup_ignores_whitespace() {
        let bank = ConlluBank::new(parse_conllu(SAMPLE, "mem").unwrap());
        assert!(bank.lookup("Does a lion  eat plants or plant parts ?").is_some());
        assert!(bank.lookup("Does a lion eat meat?").is_none());
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(parse_conllu("1\tx\tx\tNOUN\n", "m").is_err());
        assert!(parse_conllu("1\ta\ta\tDET\t_\t_\t0\troot\t_\t_\n2\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_\n", "m").is_err());
        assert!(parse_conllu("1\ta\ta\tDET\t_\t_\t7\tdep\t_\t_\n", "m").is_err());
    }
}
