//! Token scanner shared by the two formula parsers.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(usize),
    LAngle2, // <<
    RAngle2, // >>
    LBrack2, // [[
    RBrack2, // ]]
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,  // ->
    DArrow, // <->
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LAngle2 => write!(f, "`<<`"),
            Tok::RAngle2 => write!(f, "`>>`"),
            Tok::LBrack2 => write!(f, "`[[`"),
            Tok::RBrack2 => write!(f, "`]]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::DArrow => write!(f, "`<->`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{span}: {msg}")]
pub struct ParseError {
    pub span: Span,
    pub msg: String,
}

impl ParseError {
    pub fn new(span: Span, msg: impl Into<String>) -> Self {
        ParseError { span, msg: msg.into() }
    }
}

pub fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let span = Span { line, col };
        let c = bytes[i];
        let mut advance = |n: usize, col: &mut u32, i: &mut usize| {
            *col += n as u32;
            *i += n;
        };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
            }
            c if c.is_whitespace() => advance(1, &mut col, &mut i),
            '#' => {
                // comment to end of line
                while i < bytes.len() && bytes[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                out.push((Tok::LParen, span));
                advance(1, &mut col, &mut i);
            }
            ')' => {
                out.push((Tok::RParen, span));
                advance(1, &mut col, &mut i);
            }
            '{' => {
                out.push((Tok::LBrace, span));
                advance(1, &mut col, &mut i);
            }
            '}' => {
                out.push((Tok::RBrace, span));
                advance(1, &mut col, &mut i);
            }
            ',' => {
                out.push((Tok::Comma, span));
                advance(1, &mut col, &mut i);
            }
            ':' => {
                out.push((Tok::Colon, span));
                advance(1, &mut col, &mut i);
            }
            '.' => {
                out.push((Tok::Dot, span));
                advance(1, &mut col, &mut i);
            }
            '!' => {
                out.push((Tok::Bang, span));
                advance(1, &mut col, &mut i);
            }
            '&' => {
                out.push((Tok::Amp, span));
                advance(1, &mut col, &mut i);
            }
            '|' => {
                out.push((Tok::Pipe, span));
                advance(1, &mut col, &mut i);
            }
            '<' => {
                if bytes.get(i + 1) == Some(&'<') {
                    out.push((Tok::LAngle2, span));
                    advance(2, &mut col, &mut i);
                } else if bytes.get(i + 1) == Some(&'-') && bytes.get(i + 2) == Some(&'>') {
                    out.push((Tok::DArrow, span));
                    advance(3, &mut col, &mut i);
                } else {
                    return Err(ParseError::new(span, "stray `<`"));
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&'>') {
                    out.push((Tok::RAngle2, span));
                    advance(2, &mut col, &mut i);
                } else {
                    return Err(ParseError::new(span, "stray `>`"));
                }
            }
            '[' => {
                if bytes.get(i + 1) == Some(&'[') {
                    out.push((Tok::LBrack2, span));
                    advance(2, &mut col, &mut i);
                } else {
                    return Err(ParseError::new(span, "stray `[`"));
                }
            }
            ']' => {
                if bytes.get(i + 1) == Some(&']') {
                    out.push((Tok::RBrack2, span));
                    advance(2, &mut col, &mut i);
                } else {
                    return Err(ParseError::new(span, "stray `]`"));
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&'>') {
                    out.push((Tok::Arrow, span));
                    advance(2, &mut col, &mut i);
                } else {
                    return Err(ParseError::new(span, "stray `-`"));
                }
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n: usize = bytes[i..j].iter().collect::<String>().parse().unwrap();
                out.push((Tok::Int(n), span));
                advance(j - i, &mut col, &mut i);
            }
            c if c.is_alphabetic() || c == '_' || c == '@' => {
                // `@` opens a generated name which may contain `:` segments
                // (but never ends with one, so `@p :` still lexes cleanly)
                let extended = c == '@';
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_alphanumeric() || bytes[j] == '_' || (extended && bytes[j] == ':'))
                {
                    j += 1;
                }
                while extended && bytes[j - 1] == ':' {
                    j -= 1;
                }
                let s: String = bytes[i..j].iter().collect();
                out.push((Tok::Ident(s), span));
                advance(j - i, &mut col, &mut i);
            }
            c => return Err(ParseError::new(span, format!("unexpected character `{c}`"))),
        }
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}
