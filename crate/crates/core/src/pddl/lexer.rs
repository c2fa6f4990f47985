//! S-expression tokenizer and reader shared by the domain and problem parsers.

use super::ParseError;

#[derive(Debug, Clone)]
pub enum Sexp {
    Atom { text: String, line: u32, col: u32 },
    List { items: Vec<Sexp>, line: u32, col: u32 },
}

impl Sexp {
    pub fn pos(&self) -> (u32, u32) {
        match self {
            Sexp::Atom { line, col, .. } | Sexp::List { line, col, .. } => (*line, *col),
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn items(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Atom { .. } => None,
        }
    }

    /// First element's atom text when this is a non-empty list, lowercased
    /// already by the tokenizer.
    pub fn head(&self) -> Option<&str> {
        self.items().and_then(|it| it.first()).and_then(|s| s.atom())
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b';') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => {
                            return Err(ParseError::Syntax {
                                line,
                                col,
                                msg: "unclosed parenthesis".into(),
                            })
                        }
                        Some(b')') => {
                            self.bump();
                            return Ok(Sexp::List { items, line, col });
                        }
                        _ => items.push(self.read()?),
                    }
                }
            }
            Some(b')') => Err(self.err("unexpected `)`")),
            Some(_) => {
                let mut text = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b';' {
                        break;
                    }
                    text.push((self.bump().unwrap() as char).to_ascii_lowercase());
                }
                Ok(Sexp::Atom { text, line, col })
            }
        }
    }
}

/// Reads a single top-level s-expression; trailing content is an error.
pub fn read_sexp(src: &str) -> Result<Sexp, ParseError> {
    let mut sc = Scanner::new(src);
    let sexp = sc.read()?;
    sc.skip_trivia();
    if sc.peek().is_some() {
        return Err(sc.err("trailing content after top-level expression"));
    }
    Ok(sexp)
}
