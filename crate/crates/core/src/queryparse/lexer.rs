use super::ast::VarMarker;
use super::{ParseError, Position};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Var { name: String, marker: VarMarker },
    BlankLabel(String),
    Str(String),
    Number(String),
    LangTag(String),
    Word(String),
    Punct(&'static str),
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::IriRef(i) => format!("<{i}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Var { name, marker } => match marker {
                VarMarker::Question => format!("?{name}"),
                VarMarker::Placeholder => format!("${name}"),
            },
            Tok::BlankLabel(l) => format!("_:{l}"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::Number(n) => n.clone(),
            Tok::LangTag(l) => format!("@{l}"),
            Tok::Word(w) => w.clone(),
            Tok::Punct(p) => p.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: Position,
}

const PUNCTS: [&str; 23] = [
    "^^", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")", "[", "]", ".", ";", ",", "*", "/",
    "=", "<", ">", "!", "+", "-",
];

pub fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut lx = Lexer { src, bytes: src.as_bytes(), i: 0, line: 1, line_start: 0 };
    let mut out = Vec::new();
    while let Some(t) = lx.next_token()? {
        out.push(t);
    }
    Ok(out)
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    i: usize,
    line: usize,
    line_start: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

impl<'a> Lexer<'a> {
    fn pos(&self) -> Position {
        Position {
            offset: self.i,
            line: self.line,
            column: self.src[self.line_start..self.i].chars().count() + 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Lexical { pos: self.pos(), message: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.i..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.i..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.line_start = self.i;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.i;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.bump();
        }
        &self.src[start..self.i]
    }

    fn next_token(&mut self) -> Result<Option<Spanned>, ParseError> {
        self.skip_trivia();
        let pos = self.pos();
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '<' => match self.try_iri() {
                Some(iri) => Tok::IriRef(iri),
                None => self.punct()?,
            },
            '?' | '$' => {
                self.bump();
                let name = self.take_while(is_name_char);
                if name.is_empty() {
                    return Err(ParseError::Lexical {
                        pos,
                        message: format!("expected variable name after '{c}'"),
                    });
                }
                let marker = if c == '?' { VarMarker::Question } else { VarMarker::Placeholder };
                Tok::Var { name: name.to_string(), marker }
            }
            '_' if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.take_local();
                if label.is_empty() {
                    return Err(ParseError::Lexical { pos, message: "empty blank node label".into() });
                }
                Tok::BlankLabel(label)
            }
            '"' | '\'' => Tok::Str(self.string(c)?),
            '@' => {
                self.bump();
                let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                if tag.is_empty() {
                    return Err(ParseError::Lexical { pos, message: "empty language tag".into() });
                }
                Tok::LangTag(tag.to_string())
            }
            c if c.is_ascii_digit() => Tok::Number(self.number()),
            ':' => {
                self.bump();
                Tok::PName { prefix: String::new(), local: self.take_local() }
            }
            c if is_name_start(c) => {
                let word = self.take_while(|c| is_name_char(c) || c == '.');
                // A trailing '.' belongs to the statement, not the name.
                let trimmed = word.trim_end_matches('.');
                let give_back = word.len() - trimmed.len();
                self.i -= give_back;
                if self.peek() == Some(':') {
                    self.bump();
                    Tok::PName { prefix: trimmed.to_string(), local: self.take_local() }
                } else if trimmed.contains('.') {
                    return Err(ParseError::Lexical { pos, message: format!("unexpected '.' in '{trimmed}'") });
                } else {
                    Tok::Word(trimmed.to_string())
                }
            }
            _ => self.punct()?,
        };
        Ok(Some(Spanned { tok, pos }))
    }

    fn try_iri(&mut self) -> Option<String> {
        let rest = &self.src[self.i + 1..];
        let end = rest.find(|c: char| {
            c == '>' || c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
        })?;
        if rest[end..].starts_with('>') {
            let iri = rest[..end].to_string();
            self.i += end + 2;
            Some(iri)
        } else {
            None
        }
    }

    /// PN_LOCAL: may contain '.', but not end with it.
    fn take_local(&mut self) -> String {
        let start = self.i;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '.') {
                self.bump();
            } else {
                break;
            }
        }
        while self.i > start && self.bytes[self.i - 1] == b'.' {
            self.i -= 1;
        }
        self.src[start..self.i].to_string()
    }

    fn number(&mut self) -> String {
        let start = self.i;
        self.take_while(|c| c.is_ascii_digit());
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            self.take_while(|c| c.is_ascii_digit());
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = (self.i, self.line, self.line_start);
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if self.take_while(|c| c.is_ascii_digit()).is_empty() {
                (self.i, self.line, self.line_start) = save;
            }
        }
        self.src[start..self.i].to_string()
    }

    fn string(&mut self, quote: char) -> Result<String, ParseError> {
        let start = self.pos();
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    return Err(ParseError::Lexical { pos: start, message: "unterminated string literal".into() })
                }
                Some(c) if c == quote => return Ok(out),
                Some('\\') => {
                    let esc = self.bump().ok_or_else(|| self.err("unterminated escape"))?;
                    out.push(match esc {
                        't' => '\t',
                        'n' => '\n',
                        'r' => '\r',
                        'b' => '\u{8}',
                        'f' => '\u{c}',
                        '"' => '"',
                        '\'' => '\'',
                        '\\' => '\\',
                        other => return Err(self.err(format!("unknown escape '\\{other}'"))),
                    });
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn punct(&mut self) -> Result<Tok, ParseError> {
        let rest = &self.src[self.i..];
        for p in PUNCTS {
            if rest.starts_with(p) {
                self.i += p.len();
                return Ok(Tok::Punct(p));
            }
        }
        Err(self.err(format!("unexpected character '{}'", self.peek().unwrap_or(' '))))
    }
}
