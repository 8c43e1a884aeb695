//! Sort checking and identifier resolution against a task vocabulary.

use super::ast::{BinOp, Expr, ExprKind, Ident, Span};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Names an expression may reference.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    pub keypoints: Vec<String>,
    pub objects: Vec<String>,
    pub fingers: Vec<String>,
}

impl Vocabulary {
    pub fn with_standard_fingers(keypoints: Vec<String>, objects: Vec<String>) -> Vocabulary {
        Vocabulary {
            keypoints,
            objects,
            fingers: vec!["index".into(), "middle".into(), "thumb".into()],
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Sort {
    Scalar,
    Boolean,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Scalar => write!(f, "scalar"),
            Sort::Boolean => write!(f, "boolean"),
        }
    }
}

/// A single typecheck finding; checking never aborts early.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

/// Which half of a discriminator an expression is checked for.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ConstraintRole {
    /// Keypoint spatial constraint: contact atoms are forbidden.
    Point,
    /// Fingertip contact constraint: only contact atoms and boolean ops.
    Contact,
    /// No split restriction (success predicates).
    Free,
}

/// Check an expression: resolves identifiers, enforces scalar/boolean sorts,
/// and applies the point/contact split for discriminator halves. Returns all
/// diagnostics rather than failing on the first.
pub fn typecheck(expr: &Expr, vocab: &Vocabulary, role: ConstraintRole) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let sort = check(expr, vocab, role, &mut diags);
    if sort == Some(Sort::Scalar) {
        diags.push(Diagnostic {
            span: expr.span,
            message: "expression must be boolean at the top level".into(),
        });
    }
    diags
}

fn check(
    expr: &Expr,
    vocab: &Vocabulary,
    role: ConstraintRole,
    diags: &mut Vec<Diagnostic>,
) -> Option<Sort> {
    match &expr.kind {
        ExprKind::Number(_) => {
            if role == ConstraintRole::Contact {
                diags.push(Diagnostic {
                    span: expr.span,
                    message: "numeric literal in contact constraint".into(),
                });
            }
            Some(Sort::Scalar)
        }
        ExprKind::BoolLit(_) => Some(Sort::Boolean),
        ExprKind::Dist(a, b) | ExprKind::DistAxis(a, b, _) => {
            point_atom_role(expr.span, role, diags);
            resolve(a, &vocab.keypoints, "keypoint", diags);
            resolve(b, &vocab.keypoints, "keypoint", diags);
            Some(Sort::Scalar)
        }
        ExprKind::AngleBetween(a, b, c) => {
            point_atom_role(expr.span, role, diags);
            for id in [a, b, c] {
                resolve(id, &vocab.keypoints, "keypoint", diags);
            }
            Some(Sort::Scalar)
        }
        ExprKind::Coord(a, _) => {
            point_atom_role(expr.span, role, diags);
            resolve(a, &vocab.keypoints, "keypoint", diags);
            Some(Sort::Scalar)
        }
        ExprKind::Contact(f, o) => {
            contact_atom_role(expr.span, role, diags);
            resolve(f, &vocab.fingers, "fingertip", diags);
            resolve(o, &vocab.objects, "object", diags);
            Some(Sort::Boolean)
        }
        ExprKind::AnyContact(o) => {
            contact_atom_role(expr.span, role, diags);
            resolve(o, &vocab.objects, "object", diags);
            Some(Sort::Boolean)
        }
        ExprKind::Not(inner) => {
            let s = check(inner, vocab, role, diags);
            if s == Some(Sort::Scalar) {
                diags.push(Diagnostic {
                    span: expr.span,
                    message: "'!' applied to a scalar expression".into(),
                });
            }
            Some(Sort::Boolean)
        }
        ExprKind::Neg(inner) => {
            let s = check(inner, vocab, role, diags);
            if s == Some(Sort::Boolean) {
                diags.push(Diagnostic {
                    span: expr.span,
                    message: "'-' applied to a boolean expression".into(),
                });
            }
            Some(Sort::Scalar)
        }
        ExprKind::Bin(op, a, b) => {
            let sa = check(a, vocab, role, diags);
            let sb = check(b, vocab, role, diags);
            let (want, result) = if op.is_arithmetic() {
                (Sort::Scalar, Sort::Scalar)
            } else if op.is_comparison() {
                (Sort::Scalar, Sort::Boolean)
            } else {
                (Sort::Boolean, Sort::Boolean)
            };
            for (s, side) in [(sa, "left"), (sb, "right")] {
                if let Some(s) = s {
                    if s != want {
                        diags.push(Diagnostic {
                            span: expr.span,
                            message: format!(
                                "{side} operand of '{}' must be {want}, found {s}",
                                op.symbol()
                            ),
                        });
                    }
                }
            }
            if *op == BinOp::Div {
                if let ExprKind::Number(n) = b.kind {
                    if n == 0.0 {
                        diags.push(Diagnostic {
                            span: b.span,
                            message: "division by literal zero".into(),
                        });
                    }
                }
            }
            Some(result)
        }
    }
}

fn point_atom_role(span: Span, role: ConstraintRole, diags: &mut Vec<Diagnostic>) {
    if role == ConstraintRole::Contact {
        diags.push(Diagnostic {
            span,
            message: "keypoint atom in contact constraint (only contact atoms allowed)".into(),
        });
    }
}

fn contact_atom_role(span: Span, role: ConstraintRole, diags: &mut Vec<Diagnostic>) {
    if role == ConstraintRole::Point {
        diags.push(Diagnostic {
            span,
            message: "contact atom in point constraint".into(),
        });
    }
}

fn resolve(id: &Ident, names: &[String], what: &str, diags: &mut Vec<Diagnostic>) {
    if names.iter().any(|n| n == &id.name) {
        return;
    }
    let suggestion = names
        .iter()
        .map(|n| (levenshtein(&id.name, n), n))
        .min_by_key(|(d, _)| *d)
        .filter(|(d, _)| *d <= 3)
        .map(|(_, n)| format!("; did you mean '{n}'?"))
        .unwrap_or_default();
    diags.push(Diagnostic {
        span: id.span,
        message: format!("unknown {what} '{}'{suggestion}", id.name),
    });
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let cost = usize::from(ca != cb);
            cur[j + 1] = (prev[j + 1] + 1).min(cur[j] + 1).min(prev[j] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
