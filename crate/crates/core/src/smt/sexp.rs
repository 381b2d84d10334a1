//! Minimal s-expression reader for solver responses.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    /// Symbol, numeral, or keyword. Quoted symbols are stored unquoted.
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_atom(&self, s: &str) -> bool {
        self.atom() == Some(s)
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("s-expression syntax error at byte {offset}: {message}")]
pub struct SexpError {
    pub offset: usize,
    pub message: String,
}

/// Parses every top-level s-expression in `text`.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut p = Reader {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.pos >= p.src.len() {
            return Ok(out);
        }
        out.push(p.expr()?);
    }
}

pub fn parse_one(text: &str) -> Result<Sexp, SexpError> {
    let mut all = parse_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        n => Err(SexpError {
            offset: 0,
            message: format!("expected one expression, found {n}"),
        }),
    }
}

/// Net parenthesis depth of `text` ignoring strings, quoted symbols and
/// comments. A response is complete once the running depth returns to zero
/// after some non-whitespace content.
pub fn paren_balance(text: &str, state: &mut ScanState) -> i64 {
    for c in text.chars() {
        match state.mode {
            ScanMode::Normal => match c {
                '(' => state.depth += 1,
                ')' => state.depth -= 1,
                '"' => state.mode = ScanMode::Str,
                '|' => state.mode = ScanMode::Quoted,
                ';' => state.mode = ScanMode::Comment,
                _ => {}
            },
            ScanMode::Str => {
                if c == '"' {
                    state.mode = ScanMode::Normal;
                }
            }
            ScanMode::Quoted => {
                if c == '|' {
                    state.mode = ScanMode::Normal;
                }
            }
            ScanMode::Comment => {
                if c == '\n' {
                    state.mode = ScanMode::Normal;
                }
            }
        }
        if !c.is_whitespace() && state.mode != ScanMode::Comment {
            state.seen_content = true;
        }
    }
    state.depth
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
enum ScanMode {
    #[default]
    Normal,
    Str,
    Quoted,
    Comment,
}

#[derive(Debug, Clone, Default)]
pub struct ScanState {
    depth: i64,
    mode: ScanMode,
    pub seen_content: bool,
}

impl ScanState {
    pub fn complete(&self) -> bool {
        self.seen_content && self.depth == 0 && self.mode == ScanMode::Normal
    }
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn err(&self, message: &str) -> SexpError {
        SexpError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b';' {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn expr(&mut self) -> Result<Sexp, SexpError> {
        self.skip_ws();
        let Some(&c) = self.src.get(self.pos) else {
            return Err(self.err("unexpected end of input"));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        None => return Err(self.err("unclosed list")),
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(self.expr()?),
                    }
                }
            }
            b')' => Err(self.err("unexpected `)`")),
            b'"' => {
                self.pos += 1;
                let mut s = Vec::new();
                loop {
                    match self.src.get(self.pos) {
                        None => return Err(self.err("unterminated string")),
                        Some(b'"') if self.src.get(self.pos + 1) == Some(&b'"') => {
                            s.push(b'"');
                            self.pos += 2;
                        }
                        Some(b'"') => {
                            self.pos += 1;
                            break;
                        }
                        Some(&b) => {
                            s.push(b);
                            self.pos += 1;
                        }
                    }
                }
                Ok(Sexp::Str(String::from_utf8_lossy(&s).into_owned()))
            }
            b'|' => {
                self.pos += 1;
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|&b| b != b'|') {
                    self.pos += 1;
                }
                if self.pos >= self.src.len() {
                    return Err(self.err("unterminated quoted symbol"));
                }
                let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                self.pos += 1;
                Ok(Sexp::Atom(s))
            }
            _ => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|&b| {
                    !b.is_ascii_whitespace() && !matches!(b, b'(' | b')' | b'"' | b'|' | b';')
                }) {
                    self.pos += 1;
                }
                Ok(Sexp::Atom(
                    String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                ))
            }
        }
    }
}
