use std::fmt;

use super::{Pos, SyntaxError};

pub const KEYWORDS: &[&str] = &[
    "procedure",
    "operator",
    "qufunct",
    "cond",
    "const",
    "int",
    "real",
    "complex",
    "boolean",
    "qureg",
    "quconst",
    "quvoid",
    "quscratch",
    "if",
    "else",
    "for",
    "to",
    "step",
    "while",
    "measure",
    "reset",
    "dump",
    "print",
    "return",
    "and",
    "or",
    "not",
    "xor",
    "mod",
    "exit",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Ident,
    Int,
    Real,
    Symbol,
    Comment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == kw
    }

    pub fn is_symbol(&self, sym: &str) -> bool {
        self.kind == TokenKind::Symbol && self.text == sym
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::Keyword => write!(f, "keyword `{}`", self.text),
            TokenKind::Ident => write!(f, "identifier `{}`", self.text),
            TokenKind::Int | TokenKind::Real => write!(f, "number `{}`", self.text),
            TokenKind::Symbol => write!(f, "`{}`", self.text),
            TokenKind::Comment => write!(f, "comment"),
        }
    }
}

const TWO_CHAR_SYMBOLS: &[&str] = &["==", "!=", "<=", ">="];
const ONE_CHAR_SYMBOLS: &str = "()[]{};,:=+-*/^&#!<>";

/// Splits source text into tokens. Comments are dropped; use
/// [`tokenize_with_comments`] to keep them.
pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    Ok(tokenize_with_comments(source)?.into_iter().filter(|t| t.kind != TokenKind::Comment).collect())
}

pub fn tokenize_with_comments(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let (tline, tcol) = (line, col);
        let kind;
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            kind = TokenKind::Comment;
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            kind = if KEYWORDS.contains(&word.as_str()) { TokenKind::Keyword } else { TokenKind::Ident };
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                real = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            kind = if real { TokenKind::Real } else { TokenKind::Int };
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            if TWO_CHAR_SYMBOLS.contains(&two.as_str()) {
                i += 2;
            } else if ONE_CHAR_SYMBOLS.contains(c) {
                i += 1;
            } else {
                return Err(SyntaxError::new(
                    Pos::new(tline, tcol),
                    format!("invalid character `{}`", c.escape_default()),
                ));
            }
            kind = TokenKind::Symbol;
        }
        col += i - start;
        tokens.push(Token { kind, text: chars[start..i].iter().collect(), line: tline, column: tcol });
    }
    Ok(tokens)
}
