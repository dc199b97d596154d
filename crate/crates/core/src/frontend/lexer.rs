//! Tokenizer for `.mim` sources.

use std::fmt;

use crate::diag::{Diagnostic, Loc, Phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnit {
    Us,
    Ms,
    S,
}

impl TimeUnit {
    pub fn micros(self) -> u64 {
        match self {
            TimeUnit::Us => 1,
            TimeUnit::Ms => 1_000,
            TimeUnit::S => 1_000_000,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            TimeUnit::Us => "us",
            TimeUnit::Ms => "ms",
            TimeUnit::S => "s",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    KwStep,
    KwChannel,
    KwNode,
    KwImplements,
    KwEvery,
    KwPre,
    KwFby,
    KwIf,
    KwThen,
    KwElse,
    KwEither,
    KwOr,
    KwSome,
    KwNone,
    Bool(bool),
    Ident(String),
    /// `'a`, stored without the tick.
    TickIdent(String),
    Int(i64),
    Float(f64),
    /// `()`
    Unit,
    Duration(u64, TimeUnit),
    /// `-->`
    LongArrow,
    /// `->`
    Arrow,
    Question,
    Assign,
    Colon,
    Semi,
    Comma,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Underscore,
    Plus,
    Minus,
    Star,
    Slash,
    AndAnd,
    OrOr,
    Bang,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::KwStep => "'step'",
            Tok::KwChannel => "'channel'",
            Tok::KwNode => "'node'",
            Tok::KwImplements => "'implements'",
            Tok::KwEvery => "'every'",
            Tok::KwPre => "'pre'",
            Tok::KwFby => "'fby'",
            Tok::KwIf => "'if'",
            Tok::KwThen => "'then'",
            Tok::KwElse => "'else'",
            Tok::KwEither => "'either'",
            Tok::KwOr => "'or'",
            Tok::KwSome => "'Some'",
            Tok::KwNone => "'None'",
            Tok::Bool(b) => return write!(f, "'{}'", b),
            Tok::Ident(s) => return write!(f, "identifier '{}'", s),
            Tok::TickIdent(s) => return write!(f, "type variable ''{}'", s),
            Tok::Int(i) => return write!(f, "integer {}", i),
            Tok::Float(x) => return write!(f, "float {:?}", x),
            Tok::Unit => "'()'",
            Tok::Duration(v, u) => return write!(f, "duration {}{}", v, u.suffix()),
            Tok::LongArrow => "'-->'",
            Tok::Arrow => "'->'",
            Tok::Question => "'?'",
            Tok::Assign => "'='",
            Tok::Colon => "':'",
            Tok::Semi => "';'",
            Tok::Comma => "','",
            Tok::LBrace => "'{'",
            Tok::RBrace => "'}'",
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Underscore => "'_'",
            Tok::Plus => "'+'",
            Tok::Minus => "'-'",
            Tok::Star => "'*'",
            Tok::Slash => "'/'",
            Tok::AndAnd => "'&&'",
            Tok::OrOr => "'||'",
            Tok::Bang => "'!'",
            Tok::EqEq => "'=='",
            Tok::NotEq => "'!='",
            Tok::Lt => "'<'",
            Tok::Le => "'<='",
            Tok::Gt => "'>'",
            Tok::Ge => "'>='",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct LexError {
    pub loc: Loc,
    pub message: String,
}

impl From<LexError> for Diagnostic {
    fn from(e: LexError) -> Self {
        Diagnostic::new(Phase::Lex, Some(e.loc), e.message)
    }
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "step" => Tok::KwStep,
        "channel" => Tok::KwChannel,
        "node" => Tok::KwNode,
        "implements" => Tok::KwImplements,
        "every" => Tok::KwEvery,
        "pre" => Tok::KwPre,
        "fby" => Tok::KwFby,
        "if" => Tok::KwIf,
        "then" => Tok::KwThen,
        "else" => Tok::KwElse,
        "either" => Tok::KwEither,
        "or" => Tok::KwOr,
        "Some" => Tok::KwSome,
        "None" => Tok::KwNone,
        "true" => Tok::Bool(true),
        "false" => Tok::Bool(false),
        _ => return None,
    })
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn loc(&self) -> Loc {
        Loc::new(self.pos, self.line, self.col)
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.bytes.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.src[self.pos..].chars().next()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, loc: Loc, message: impl Into<String>) -> LexError {
        LexError { loc, message: message.into() }
    }

    /// Skips whitespace and nestable `(* ... *)` comments.
    fn skip_trivia(&mut self) -> Result<(), LexError> {
        loop {
            match self.peek_at(0) {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'(') if self.peek_at(1) == Some(b'*') => {
                    let start = self.loc();
                    self.bump();
                    self.bump();
                    let mut depth = 1;
                    while depth > 0 {
                        match (self.peek_at(0), self.peek_at(1)) {
                            (None, _) => return Err(self.error(start, "unterminated comment")),
                            (Some(b'('), Some(b'*')) => {
                                self.bump();
                                self.bump();
                                depth += 1;
                            }
                            (Some(b'*'), Some(b')')) => {
                                self.bump();
                                self.bump();
                                depth -= 1;
                            }
                            _ => {
                                self.bump();
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek_at(0), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self, loc: Loc) -> Result<Tok, LexError> {
        let start = self.pos;
        while matches!(self.peek_at(0), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        let mut is_float = false;
        if self.peek_at(0) == Some(b'.') && matches!(self.peek_at(1), Some(c) if c.is_ascii_digit()) {
            is_float = true;
            self.bump();
            while matches!(self.peek_at(0), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
        }
        if self.peek_at(0) == Some(b'e') {
            let digits_at = match self.peek_at(1) {
                Some(b'+') | Some(b'-') => 2,
                _ => 1,
            };
            if matches!(self.peek_at(digits_at), Some(c) if c.is_ascii_digit()) {
                is_float = true;
                for _ in 0..digits_at {
                    self.bump();
                }
                while matches!(self.peek_at(0), Some(c) if c.is_ascii_digit()) {
                    self.bump();
                }
            }
        }
        let text = &self.src[start..self.pos];
        if is_float {
            if matches!(self.peek_at(0), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
                let suffix = self.word();
                return Err(self.error(loc, format!("invalid suffix '{}' on float literal", suffix)));
            }
            return text
                .parse::<f64>()
                .map(Tok::Float)
                .map_err(|_| self.error(loc, format!("invalid float literal '{}'", text)));
        }
        let value: u64 =
            text.parse().map_err(|_| self.error(loc, format!("integer literal '{}' is too large", text)))?;
        if matches!(self.peek_at(0), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
            let suffix = self.word();
            let unit = match suffix {
                "us" => TimeUnit::Us,
                "ms" => TimeUnit::Ms,
                "s" => TimeUnit::S,
                _ => return Err(self.error(loc, format!("unknown duration unit '{}'", suffix))),
            };
            return Ok(Tok::Duration(value, unit));
        }
        i64::try_from(value)
            .map(Tok::Int)
            .map_err(|_| self.error(loc, format!("integer literal '{}' is too large", text)))
    }

    /// True when the upcoming `(` is followed only by trivia and `)`.
    fn at_unit(&self) -> bool {
        let mut probe =
            Lexer { src: self.src, bytes: self.bytes, pos: self.pos + 1, line: self.line, col: self.col + 1 };
        probe.skip_trivia().is_ok() && probe.peek_at(0) == Some(b')')
    }

    fn next_token(&mut self) -> Result<Option<Token>, LexError> {
        self.skip_trivia()?;
        let loc = self.loc();
        let c = match self.peek_at(0) {
            None => return Ok(None),
            Some(c) => c,
        };
        let two = |s: &Self, a: u8| s.peek_at(1) == Some(a);
        let (tok, len) = match c {
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let w = self.word();
                let tok = if w == "_" {
                    Tok::Underscore
                } else if w.starts_with('_') {
                    return Err(self.error(loc, format!("identifier '{}' may not begin with '_'", w)));
                } else {
                    keyword(w).unwrap_or_else(|| Tok::Ident(w.to_string()))
                };
                return Ok(Some(Token { tok, loc }));
            }
            b'0'..=b'9' => {
                let tok = self.number(loc)?;
                return Ok(Some(Token { tok, loc }));
            }
            b'\'' => {
                self.bump();
                if !matches!(self.peek_at(0), Some(c) if c.is_ascii_alphabetic()) {
                    return Err(self.error(loc, "expected a type variable name after '\\''"));
                }
                let w = self.word();
                return Ok(Some(Token { tok: Tok::TickIdent(w.to_string()), loc }));
            }
            b'(' => {
                if self.at_unit() {
                    self.bump();
                    self.skip_trivia()?;
                    self.bump();
                    return Ok(Some(Token { tok: Tok::Unit, loc }));
                }
                (Tok::LParen, 1)
            }
            b')' => (Tok::RParen, 1),
            b'{' => (Tok::LBrace, 1),
            b'}' => (Tok::RBrace, 1),
            b'-' if two(self, b'-') && self.peek_at(2) == Some(b'>') => (Tok::LongArrow, 3),
            b'-' if two(self, b'>') => (Tok::Arrow, 2),
            b'-' => (Tok::Minus, 1),
            b'?' => (Tok::Question, 1),
            b'=' if two(self, b'=') => (Tok::EqEq, 2),
            b'=' => (Tok::Assign, 1),
            b':' => (Tok::Colon, 1),
            b';' => (Tok::Semi, 1),
            b',' => (Tok::Comma, 1),
            b'+' => (Tok::Plus, 1),
            b'*' => (Tok::Star, 1),
            b'/' => (Tok::Slash, 1),
            b'&' if two(self, b'&') => (Tok::AndAnd, 2),
            b'|' if two(self, b'|') => (Tok::OrOr, 2),
            b'!' if two(self, b'=') => (Tok::NotEq, 2),
            b'!' => (Tok::Bang, 1),
            b'<' if two(self, b'=') => (Tok::Le, 2),
            b'<' => (Tok::Lt, 1),
            b'>' if two(self, b'=') => (Tok::Ge, 2),
            b'>' => (Tok::Gt, 1),
            _ => {
                let ch = self.src[self.pos..].chars().next().unwrap();
                return Err(self.error(loc, format!("unexpected character '{}'", ch)));
            }
        };
        for _ in 0..len {
            self.bump();
        }
        Ok(Some(Token { tok, loc }))
    }
}

/// Splits source text into tokens, dropping whitespace and comments.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut lx = Lexer { src: source, bytes: source.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(t) = lx.next_token()? {
        out.push(t);
    }
    Ok(out)
}
