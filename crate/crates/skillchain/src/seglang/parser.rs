//! Recursive-descent parser.
//!
//! Grammar (also published in the guide):
//!
//! ```text
//! expr    := or
//! or      := and ( "||" and )*
//! and     := cmp ( "&&" cmp )*
//! cmp     := sum ( ("<" | "<=" | ">" | ">=") sum )?
//! sum     := term ( ("+" | "-") term )*
//! term    := unary ( ("*" | "/") unary )*
//! unary   := "!" unary | "-" unary | primary
//! primary := number | "true" | "false" | call | "(" expr ")"
//! call    := ident "(" args ")"
//! ```

use super::ast::{Axis, BinOp, Expr, ExprKind, Ident, Span};
use super::lexer::{lex, SpannedTok, Tok};
use super::ParseError;

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    if src.trim().is_empty() {
        return Err(ParseError {
            span: Span { line: 1, col: 1 },
            message: "empty expression".into(),
            expected: vec!["expression".into()],
        });
    }
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let expr = p.or_expr()?;
    p.expect_eof()?;
    Ok(expr)
}

struct Parser {
    toks: Vec<SpannedTok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &SpannedTok {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> SpannedTok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError {
            span: t.span,
            message: format!("unexpected {}", t.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance().span)
        } else {
            Err(self.err(&[what]))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.err(&["end of input"]))
        }
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and_expr()?;
        while self.peek().tok == Tok::Or {
            let span = self.advance().span;
            let rhs = self.and_expr()?;
            lhs = Expr::new(ExprKind::Bin(BinOp::Or, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.cmp_expr()?;
        while self.peek().tok == Tok::And {
            let span = self.advance().span;
            let rhs = self.cmp_expr()?;
            lhs = Expr::new(ExprKind::Bin(BinOp::And, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn cmp_expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.sum_expr()?;
        let op = match self.peek().tok {
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return Ok(lhs),
        };
        let span = self.advance().span;
        let rhs = self.sum_expr()?;
        Ok(Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span))
    }

    fn sum_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term_expr()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            let span = self.advance().span;
            let rhs = self.term_expr()?;
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn term_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary_expr()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            let span = self.advance().span;
            let rhs = self.unary_expr()?;
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok {
            Tok::Not => {
                let span = self.advance().span;
                let inner = self.unary_expr()?;
                Ok(Expr::new(ExprKind::Not(Box::new(inner)), span))
            }
            Tok::Minus => {
                let span = self.advance().span;
                let inner = self.unary_expr()?;
                Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span))
            }
            _ => self.primary_expr(),
        }
    }

    fn primary_expr(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(n) => {
                self.advance();
                Ok(Expr::new(ExprKind::Number(n), t.span))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.or_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(ref name) => {
                self.advance();
                match name.as_str() {
                    "true" => Ok(Expr::new(ExprKind::BoolLit(true), t.span)),
                    "false" => Ok(Expr::new(ExprKind::BoolLit(false), t.span)),
                    _ => self.call_expr(name.clone(), t.span),
                }
            }
            _ => Err(self.err(&["number", "function call", "'('", "'!'", "'-'"])),
        }
    }

    fn call_expr(&mut self, name: String, span: Span) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen, "'(' after function name")?;
        let kind = match name.as_str() {
            "dist" => {
                let a = self.ident_arg()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.ident_arg()?;
                ExprKind::Dist(a, b)
            }
            "dist_axis" => {
                let a = self.ident_arg()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.ident_arg()?;
                self.expect(Tok::Comma, "','")?;
                let ax = self.axis_arg()?;
                ExprKind::DistAxis(a, b, ax)
            }
            "angle_between" => {
                let a = self.ident_arg()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.ident_arg()?;
                self.expect(Tok::Comma, "','")?;
                let c = self.ident_arg()?;
                ExprKind::AngleBetween(a, b, c)
            }
            "coord" => {
                let a = self.ident_arg()?;
                self.expect(Tok::Comma, "','")?;
                let ax = self.axis_arg()?;
                ExprKind::Coord(a, ax)
            }
            "contact" => {
                let a = self.ident_arg()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.ident_arg()?;
                ExprKind::Contact(a, b)
            }
            "any_contact" => {
                let a = self.ident_arg()?;
                ExprKind::AnyContact(a)
            }
            other => {
                return Err(ParseError {
                    span,
                    message: format!("unknown function '{other}'"),
                    expected: vec![
                        "dist".into(),
                        "dist_axis".into(),
                        "angle_between".into(),
                        "coord".into(),
                        "contact".into(),
                        "any_contact".into(),
                    ],
                });
            }
        };
        self.expect(Tok::RParen, "')'")?;
        Ok(Expr::new(kind, span))
    }

    fn ident_arg(&mut self) -> Result<Ident, ParseError> {
        let t = self.peek().clone();
        if let Tok::Ident(name) = t.tok {
            self.advance();
            Ok(Ident { name, span: t.span })
        } else {
            Err(self.err(&["identifier"]))
        }
    }

    fn axis_arg(&mut self) -> Result<Axis, ParseError> {
        let id = self.ident_arg()?;
        match id.name.as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            other => Err(ParseError {
                span: id.span,
                message: format!("expected axis 'x' or 'y', found '{other}'"),
                expected: vec!["'x'".into(), "'y'".into()],
            }),
        }
    }
}
