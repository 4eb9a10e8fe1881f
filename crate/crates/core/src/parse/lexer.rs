//! Tokeniser shared by both dialects.
//!
//! Comments never reach the token stream; they are collected separately so
//! that the parser can attach them afterwards. Malformed input produces
//! [`TokenKind::Invalid`] tokens rather than failing, leaving the decision to
//! the statement parser.

use crate::model::Dialect;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Variable(String),
    Integer(i64),
    Str(String),
    /// `#name`, including the hash.
    Directive(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Colon,
    If,
    WeakIf,
    Dot,
    DotDot,
    Bar,
    Eq,
    EqEq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawComment {
    pub text: String,
    pub block: bool,
    pub start: usize,
    pub end: usize,
    pub terminated: bool,
}

#[derive(Debug, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    pub comments: Vec<RawComment>,
}

pub fn lex(source: &str, dialect: Dialect) -> Lexed {
    Lexer {
        src: source,
        bytes: source.as_bytes(),
        pos: 0,
        dialect,
        out: Lexed::default(),
    }
    .run()
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    dialect: Dialect,
    out: Lexed,
}

impl Lexer<'_> {
    fn peek(&self, ahead: usize) -> Option<u8> {
        self.bytes.get(self.pos + ahead).copied()
    }

    fn push(&mut self, kind: TokenKind, start: usize) {
        self.out.tokens.push(Token {
            kind,
            start,
            end: self.pos,
        });
    }

    fn run(mut self) -> Lexed {
        while let Some(b) = self.peek(0) {
            let start = self.pos;
            match b {
                b if b.is_ascii_whitespace() => self.pos += 1,
                b'%' => self.comment(),
                b'a'..=b'z' => {
                    let word = self.word();
                    self.push(TokenKind::Ident(word), start);
                }
                b'A'..=b'Z' | b'_' => {
                    let word = self.word();
                    self.push(TokenKind::Variable(word), start);
                }
                b'0'..=b'9' => {
                    while self.peek(0).is_some_and(|b| b.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let kind = match self.src[start..self.pos].parse() {
                        Ok(n) => TokenKind::Integer(n),
                        Err(_) => TokenKind::Invalid("integer literal out of range".into()),
                    };
                    self.push(kind, start);
                }
                b'"' => self.string(),
                b'#' => {
                    self.pos += 1;
                    let word = self.word();
                    let kind = if word.is_empty() {
                        TokenKind::Invalid("`#` must be followed by a directive name".into())
                    } else {
                        TokenKind::Directive(format!("#{word}"))
                    };
                    self.push(kind, start);
                }
                _ => self.punct(),
            }
        }
        self.out
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self
            .peek(0)
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'\'')
        {
            self.pos += 1;
        }
        self.src[start..self.pos].to_string()
    }

    fn comment(&mut self) {
        let start = self.pos;
        if self.dialect == Dialect::Gringo && self.peek(1) == Some(b'*') {
            match self.src[start + 2..].find("*%") {
                Some(i) => {
                    self.pos = start + 2 + i + 2;
                    self.record_comment(start, true, true);
                }
                None => {
                    self.pos = self.bytes.len();
                    self.record_comment(start, true, false);
                }
            }
            return;
        }
        while self.peek(0).is_some_and(|b| b != b'\n') {
            self.pos += 1;
        }
        // keep a trailing '\r' out of the comment text
        let end = if self.src[start..self.pos].ends_with('\r') {
            self.pos - 1
        } else {
            self.pos
        };
        self.out.comments.push(RawComment {
            text: self.src[start..end].to_string(),
            block: false,
            start,
            end,
            terminated: true,
        });
    }

    fn record_comment(&mut self, start: usize, block: bool, terminated: bool) {
        self.out.comments.push(RawComment {
            text: self.src[start..self.pos].to_string(),
            block,
            start,
            end: self.pos,
            terminated,
        });
    }

    fn string(&mut self) {
        let start = self.pos;
        self.pos += 1;
        let mut value = String::new();
        let mut chars = self.src[self.pos..].char_indices();
        loop {
            match chars.next() {
                None => {
                    self.pos = self.bytes.len();
                    self.push(TokenKind::Invalid("unterminated string".into()), start);
                    return;
                }
                Some((i, '"')) => {
                    self.pos += i + 1;
                    break;
                }
                Some((_, '\\')) => match chars.next() {
                    Some((_, 'n')) => value.push('\n'),
                    Some((_, c)) => value.push(c),
                    None => continue,
                },
                Some((_, '\n')) => {
                    // strings may not span lines; stop here so the next line lexes normally
                    let (i, _) = self.src[self.pos..].char_indices().find(|(_, c)| *c == '\n').unwrap();
                    self.pos += i;
                    self.push(TokenKind::Invalid("unterminated string".into()), start);
                    return;
                }
                Some((_, c)) => value.push(c),
            }
        }
        self.push(TokenKind::Str(value), start);
    }

    fn punct(&mut self) {
        use TokenKind::*;
        let start = self.pos;
        let two = (self.peek(0), self.peek(1));
        let (kind, len) = match two {
            (Some(b':'), Some(b'-')) => (If, 2),
            (Some(b':'), Some(b'~')) => (WeakIf, 2),
            (Some(b'.'), Some(b'.')) => (DotDot, 2),
            (Some(b'='), Some(b'=')) => (EqEq, 2),
            (Some(b'!'), Some(b'=')) => (Ne, 2),
            (Some(b'<'), Some(b'>')) => (Ne, 2),
            (Some(b'<'), Some(b'=')) => (Le, 2),
            (Some(b'>'), Some(b'=')) => (Ge, 2),
            (Some(b'('), _) => (LParen, 1),
            (Some(b')'), _) => (RParen, 1),
            (Some(b'{'), _) => (LBrace, 1),
            (Some(b'}'), _) => (RBrace, 1),
            (Some(b'['), _) => (LBracket, 1),
            (Some(b']'), _) => (RBracket, 1),
            (Some(b','), _) => (Comma, 1),
            (Some(b';'), _) => (Semicolon, 1),
            (Some(b':'), _) => (Colon, 1),
            (Some(b'.'), _) => (Dot, 1),
            (Some(b'|'), _) => (Bar, 1),
            (Some(b'='), _) => (Eq, 1),
            (Some(b'<'), _) => (Lt, 1),
            (Some(b'>'), _) => (Gt, 1),
            (Some(b'+'), _) => (Plus, 1),
            (Some(b'-'), _) => (Minus, 1),
            (Some(b'*'), _) => (Star, 1),
            (Some(b'/'), _) => (Slash, 1),
            _ => {
                let c = self.src[start..].chars().next().unwrap_or('?');
                (Invalid(format!("unexpected character `{c}`")), c.len_utf8())
            }
        };
        self.pos += len;
        self.push(kind, start);
    }
}
