//! Expression AST for the discriminator language.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Source location, 1-based.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge)
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div)
    }

    /// Binding strength for printing with minimal parentheses.
    fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 3,
            BinOp::Add | BinOp::Sub => 4,
            BinOp::Mul | BinOp::Div => 5,
        }
    }
}

/// An identifier with its source span (keypoint, object, or finger name).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExprKind {
    Number(f64),
    BoolLit(bool),
    /// Euclidean distance between two keypoints.
    Dist(Ident, Ident),
    /// |coordinate difference| along one axis.
    DistAxis(Ident, Ident, Axis),
    /// Angle at the middle keypoint, in [0, pi].
    AngleBetween(Ident, Ident, Ident),
    /// One coordinate of a keypoint.
    Coord(Ident, Axis),
    /// Fingertip-object contact above the world force threshold.
    Contact(Ident, Ident),
    /// Any contact involving the object.
    AnyContact(Ident),
    Not(Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    /// Structural equality ignoring source spans.
    pub fn structurally_eq(&self, other: &Expr) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Number(a), Number(b)) => a == b,
            (BoolLit(a), BoolLit(b)) => a == b,
            (Dist(a1, a2), Dist(b1, b2)) => a1.name == b1.name && a2.name == b2.name,
            (DistAxis(a1, a2, ax), DistAxis(b1, b2, bx)) => {
                a1.name == b1.name && a2.name == b2.name && ax == bx
            }
            (AngleBetween(a1, a2, a3), AngleBetween(b1, b2, b3)) => {
                a1.name == b1.name && a2.name == b2.name && a3.name == b3.name
            }
            (Coord(a1, ax), Coord(b1, bx)) => a1.name == b1.name && ax == bx,
            (Contact(a1, a2), Contact(b1, b2)) => a1.name == b1.name && a2.name == b2.name,
            (AnyContact(a1), AnyContact(b1)) => a1.name == b1.name,
            (Not(a), Not(b)) | (Neg(a), Neg(b)) => a.structurally_eq(b),
            (Bin(oa, a1, a2), Bin(ob, b1, b2)) => {
                oa == ob && a1.structurally_eq(b1) && a2.structurally_eq(b2)
            }
            _ => false,
        }
    }

    /// Collects atoms for the point/contact split check.
    pub fn contains_contact_atom(&self) -> bool {
        match &self.kind {
            ExprKind::Contact(..) | ExprKind::AnyContact(..) => true,
            ExprKind::Not(e) | ExprKind::Neg(e) => e.contains_contact_atom(),
            ExprKind::Bin(_, a, b) => a.contains_contact_atom() || b.contains_contact_atom(),
            _ => false,
        }
    }

    pub fn contains_point_atom(&self) -> bool {
        match &self.kind {
            ExprKind::Dist(..)
            | ExprKind::DistAxis(..)
            | ExprKind::AngleBetween(..)
            | ExprKind::Coord(..)
            | ExprKind::Number(_) => true,
            ExprKind::Not(e) | ExprKind::Neg(e) => e.contains_point_atom(),
            ExprKind::Bin(_, a, b) => a.contains_point_atom() || b.contains_point_atom(),
            _ => false,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(n) => {
                if n.fract() == 0.0 && n.abs() < 1e15 {
                    write!(f, "{n:.1}")
                } else {
                    write!(f, "{n}")
                }
            }
            ExprKind::BoolLit(b) => write!(f, "{b}"),
            ExprKind::Dist(a, b) => write!(f, "dist({}, {})", a.name, b.name),
            ExprKind::DistAxis(a, b, ax) => {
                write!(f, "dist_axis({}, {}, {})", a.name, b.name, ax.name())
            }
            ExprKind::AngleBetween(a, b, c) => {
                write!(f, "angle_between({}, {}, {})", a.name, b.name, c.name)
            }
            ExprKind::Coord(a, ax) => write!(f, "coord({}, {})", a.name, ax.name()),
            ExprKind::Contact(a, b) => write!(f, "contact({}, {})", a.name, b.name),
            ExprKind::AnyContact(a) => write!(f, "any_contact({})", a.name),
            ExprKind::Not(e) => {
                write!(f, "!")?;
                e.fmt_prec(f, 6)
            }
            ExprKind::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 6)
            }
            ExprKind::Bin(op, a, b) => {
                let prec = op.precedence();
                let need = prec < parent
                    || (prec == parent && (op.is_comparison() || matches!(op, BinOp::Sub | BinOp::Div)));
                if need {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, prec)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_prec(f, prec + 1)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
