/// A token before tagging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub placeholder: bool,
}

const CLITICS: [&str; 7] = ["n't", "'s", "'re", "'ve", "'ll", "'m", "'d"];

fn is_punct(c: char) -> bool {
    matches!(c, '?' | ',' | '.' | '!' | ';' | ':' | '(' | ')' | '"' | '“' | '”' | '‘' | '’' | '\'' | '[' | ']')
}

/// Splits CQ text into tokens. Bracketed placeholders stay whole, hyphenated
/// words stay whole, clitics (`'s`, `n't`, ...) are split off.
pub fn tokenize(text: &str) -> Vec<RawToken> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '[' {
            if let Some(close) = chars[i..].iter().position(|&(_, c)| c == ']') {
                let end = chars[i + close].0 + 1;
                let inner = text[start + 1..end - 1].split_whitespace().collect::<Vec<_>>().join(" ");
                out.push(RawToken { surface: format!("[{inner}]"), placeholder: true });
                i += close + 1;
                continue;
            }
        }
        let mut j = i;
        while j < chars.len() && !chars[j].1.is_whitespace() && chars[j].1 != '[' {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        split_word(&text[start..end], &mut out);
        i = j;
    }
    out
}

fn split_word(word: &str, out: &mut Vec<RawToken>) {
    let push = |s: &str, out: &mut Vec<RawToken>| out.push(RawToken { surface: s.to_string(), placeholder: false });
    let mut rest = word;
    while let Some(c) = rest.chars().next().filter(|&c| is_punct(c)) {
        push(&rest[..c.len_utf8()], out);
        rest = &rest[c.len_utf8()..];
    }
    let mut trailing = Vec::new();
    loop {
        let Some(c) = rest.chars().last() else { break };
        if is_punct(c) {
            trailing.push(&rest[rest.len() - c.len_utf8()..]);
            rest = &rest[..rest.len() - c.len_utf8()];
        } else {
            break;
        }
    }
    if !rest.is_empty() {
        let normalized = rest.replace('’', "'");
        let lower = normalized.to_lowercase();
        match CLITICS.iter().find(|cl| lower.ends_with(*cl) && lower.len() > cl.len()) {
            Some(cl) => {
                let cut = normalized.len() - cl.len();
                push(&normalized[..cut], out);
                push(&normalized[cut..], out);
            }
            None => push(rest, out),
        }
    }
    for t in trailing.into_iter().rev() {
        push(t, out);
    }
}
