//! Tokenizer with line/column tracking.

use super::ast::Span;
use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Number(f64),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Lt => "'<'".into(),
            Tok::Le => "'<='".into(),
            Tok::Gt => "'>'".into(),
            Tok::Ge => "'>='".into(),
            Tok::And => "'&&'".into(),
            Tok::Or => "'||'".into(),
            Tok::Not => "'!'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpannedTok {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<SpannedTok>, ParseError> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = src.chars().peekable();

    macro_rules! push {
        ($tok:expr, $span:expr) => {
            out.push(SpannedTok { tok: $tok, span: $span })
        };
    }

    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                // Comment to end of line.
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                chars.next();
                col += 1;
                push!(Tok::LParen, span);
            }
            ')' => {
                chars.next();
                col += 1;
                push!(Tok::RParen, span);
            }
            ',' => {
                chars.next();
                col += 1;
                push!(Tok::Comma, span);
            }
            '+' => {
                chars.next();
                col += 1;
                push!(Tok::Plus, span);
            }
            '-' => {
                chars.next();
                col += 1;
                push!(Tok::Minus, span);
            }
            '*' => {
                chars.next();
                col += 1;
                push!(Tok::Star, span);
            }
            '/' => {
                chars.next();
                col += 1;
                push!(Tok::Slash, span);
            }
            '<' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Le, span);
                } else {
                    push!(Tok::Lt, span);
                }
            }
            '>' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Ge, span);
                } else {
                    push!(Tok::Gt, span);
                }
            }
            '!' => {
                chars.next();
                col += 1;
                push!(Tok::Not, span);
            }
            '&' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'&') {
                    chars.next();
                    col += 1;
                    push!(Tok::And, span);
                } else {
                    return Err(ParseError {
                        span,
                        message: "expected '&&'".into(),
                        expected: vec!["'&&'".into()],
                    });
                }
            }
            '|' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'|') {
                    chars.next();
                    col += 1;
                    push!(Tok::Or, span);
                } else {
                    return Err(ParseError {
                        span,
                        message: "expected '||'".into(),
                        expected: vec!["'||'".into()],
                    });
                }
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' {
                        text.push(c);
                        chars.next();
                        col += 1;
                    } else if (c == '+' || c == '-')
                        && matches!(text.chars().last(), Some('e') | Some('E'))
                    {
                        text.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n: f64 = text.parse().map_err(|_| ParseError {
                    span,
                    message: format!("malformed number literal '{text}'"),
                    expected: vec!["number".into()],
                })?;
                push!(Tok::Number(n), span);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        text.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Ident(text), span);
            }
            other => {
                return Err(ParseError {
                    span,
                    message: format!("unexpected character '{other}'"),
                    expected: vec![],
                });
            }
        }
    }
    out.push(SpannedTok {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
