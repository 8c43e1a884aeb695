//! The discriminator expression language.
//!
//! Per-frame skill classifiers are written as small boolean expressions over
//! keypoint geometry and fingertip contacts. A skill discriminator is the
//! conjunction of a point constraint (keypoint relations only) and a contact
//! constraint (contact atoms only); success predicates use the same language
//! without the split restriction.
//!
//! Units are meters and radians throughout; literals are unit-bare.
//! Expressions are immutable after parsing and safe to share across threads;
//! evaluation is pure and reentrant.

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod typecheck;

pub use ast::{Axis, BinOp, Expr, ExprKind, Ident, Span};
pub use eval::{eval_expr, FrameContext, Value};
pub use parser::parse;
pub use typecheck::{typecheck, ConstraintRole, Diagnostic, Sort, Vocabulary};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
#[error("parse error at {span}: {message}{}", expected_list(.expected))]
pub struct ParseError {
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

fn expected_list(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(" or "))
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("division by zero in '{subexpr}'")]
    DivisionByZero { subexpr: String },
    #[error("identifier '{name}' not present in frame")]
    UnknownIdentifier { name: String },
}

/// A compiled frame classifier for one skill: point constraint AND contact
/// constraint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Discriminator {
    pub skill_index: usize,
    pub point_expr: Expr,
    pub contact_expr: Expr,
}

impl Discriminator {
    /// Parse and split-check both constraint sources.
    pub fn compile(
        skill_index: usize,
        point_src: &str,
        contact_src: &str,
        vocab: &Vocabulary,
    ) -> Result<Discriminator, CompileError> {
        let point_expr = parse(point_src).map_err(CompileError::Parse)?;
        let contact_expr = parse(contact_src).map_err(CompileError::Parse)?;
        let mut diags = typecheck(&point_expr, vocab, ConstraintRole::Point);
        diags.extend(typecheck(&contact_expr, vocab, ConstraintRole::Contact));
        if !diags.is_empty() {
            return Err(CompileError::Type(diags));
        }
        Ok(Discriminator {
            skill_index,
            point_expr,
            contact_expr,
        })
    }

    /// Strict conjunction of the two constraints.
    pub fn eval(&self, frame: &FrameContext) -> Result<bool, EvalError> {
        let p = eval_expr(&self.point_expr, frame)?;
        let Value::Boolean(p) = p else {
            unreachable!("typecheck guarantees boolean")
        };
        if !p {
            return Ok(false);
        }
        let c = eval_expr(&self.contact_expr, frame)?;
        let Value::Boolean(c) = c else {
            unreachable!("typecheck guarantees boolean")
        };
        Ok(c)
    }

    /// Stable content hash of the source forms, for staleness detection.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(self.point_expr.to_string().as_bytes());
        h.update(b"\x1f");
        h.update(self.contact_expr.to_string().as_bytes());
        format!("{:x}", h.finalize())[..16].to_string()
    }
}

#[derive(Clone, Debug, Error)]
pub enum CompileError {
    #[error("{0}")]
    Parse(ParseError),
    #[error("typecheck failed: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Type(Vec<Diagnostic>),
}

/// Parse and typecheck a free-role predicate (e.g. a success test).
pub fn compile_predicate(src: &str, vocab: &Vocabulary) -> Result<Expr, CompileError> {
    let expr = parse(src).map_err(CompileError::Parse)?;
    let diags = typecheck(&expr, vocab, ConstraintRole::Free);
    if !diags.is_empty() {
        return Err(CompileError::Type(diags));
    }
    Ok(expr)
}

/// Evaluate a boolean predicate expression.
pub fn eval_bool(expr: &Expr, frame: &FrameContext) -> Result<bool, EvalError> {
    match eval_expr(expr, frame)? {
        Value::Boolean(b) => Ok(b),
        Value::Scalar(_) => unreachable!("typecheck guarantees boolean"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec2;

    fn vocab() -> Vocabulary {
        Vocabulary::with_standard_fingers(
            vec!["bulb_top".into(), "socket_center".into(), "a".into(), "b".into(), "c".into()],
            vec!["bulb".into(), "socket".into()],
        )
    }

    fn frame() -> FrameContext {
        FrameContext {
            keypoints: vec![
                ("bulb_top".into(), vec2(0.0, 0.0)),
                ("socket_center".into(), vec2(0.0, 0.01)),
                ("a".into(), vec2(0.0, 0.0)),
                ("b".into(), vec2(3.0, 4.0)),
                ("c".into(), vec2(1.0, 0.0)),
            ],
            contacts: vec![],
            objects: vec![("bulb".into(), 0), ("socket".into(), 1)],
            contact_force_threshold: 0.1,
        }
    }

    #[test]
    fn parses_comparison_over_sum() {
        let e = parse("dist(bulb_top, socket_center) < 0.02 + 0.0").unwrap();
        match &e.kind {
            ExprKind::Bin(BinOp::Lt, lhs, rhs) => {
                assert!(matches!(lhs.kind, ExprKind::Dist(..)));
                assert!(matches!(rhs.kind, ExprKind::Bin(BinOp::Add, ..)));
            }
            other => panic!("unexpected parse: {other:?}"),
        }
    }

    #[test]
    fn parses_contact_conjunction() {
        let e = parse("contact(thumb, bulb) && contact(index, bulb)").unwrap();
        match &e.kind {
            ExprKind::Bin(BinOp::And, lhs, rhs) => {
                assert!(matches!(lhs.kind, ExprKind::Contact(..)));
                assert!(matches!(rhs.kind, ExprKind::Contact(..)));
            }
            other => panic!("unexpected parse: {other:?}"),
        }
    }

    #[test]
    fn dangling_comparison_reports_position() {
        let err = parse("dist(a,b) <").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert!(err.message.contains("end of input"), "{err}");
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn contact_atom_in_point_role_flagged() {
        let e = parse("contact(thumb, bulb)").unwrap();
        let diags = typecheck(&e, &vocab(), ConstraintRole::Point);
        assert!(diags.iter().any(|d| d.message.contains("contact atom in point constraint")));
    }

    #[test]
    fn unknown_keypoint_suggests_nearest() {
        let e = parse("dist(socket_centre, a) < 1.0").unwrap();
        let diags = typecheck(&e, &vocab(), ConstraintRole::Free);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("socket_centre"));
        assert!(diags[0].message.contains("did you mean 'socket_center'"));
    }

    #[test]
    fn well_formed_pair_typechecks() {
        let d = Discriminator::compile(
            1,
            "dist(bulb_top, socket_center) < 0.02",
            "contact(thumb, bulb) && contact(index, bulb)",
            &vocab(),
        );
        assert!(d.is_ok());
    }

    #[test]
    fn strict_conjunction_semantics() {
        let d = Discriminator::compile(1, "true", "contact(thumb, bulb)", &vocab()).unwrap();
        // Point constraint true, contact constraint false (no contacts).
        assert!(!d.eval(&frame()).unwrap());
    }

    #[test]
    fn dist_is_euclidean_and_comparisons_strict() {
        let f = frame();
        let e = parse("dist(a, b)").unwrap();
        match eval_expr(&e, &f).unwrap() {
            Value::Scalar(v) => assert_eq!(v, 5.0),
            _ => panic!(),
        }
        let lt = compile_predicate("dist(a, b) < 5.0", &vocab()).unwrap();
        assert!(!eval_bool(&lt, &f).unwrap());
        let le = compile_predicate("dist(a, b) <= 5.0", &vocab()).unwrap();
        assert!(eval_bool(&le, &f).unwrap());
    }

    #[test]
    fn division_by_zero_reports_subexpression() {
        let f = frame();
        let e = parse("1.0 / (coord(a, x)) > 0.0").unwrap();
        match eval_expr(&e, &f) {
            Err(EvalError::DivisionByZero { subexpr }) => {
                assert!(subexpr.contains("coord(a, x)"), "{subexpr}");
            }
            other => panic!("expected division error, got {other:?}"),
        }
    }

    #[test]
    fn angle_between_is_at_middle_point() {
        let f = frame();
        // a=(0,0), c=(1,0) seen from b=(3,4).
        let e = parse("angle_between(a, b, c)").unwrap();
        let Value::Scalar(v) = eval_expr(&e, &f).unwrap() else { panic!() };
        let u = vec2(0.0 - 3.0, 0.0 - 4.0);
        let w = vec2(1.0 - 3.0, 0.0 - 4.0);
        let expect = (u.dot(w) / (u.norm() * w.norm())).acos();
        assert!((v - expect).abs() < 1e-12);
        assert!((0.0..=std::f64::consts::PI).contains(&v));
    }

    #[test]
    fn pretty_print_reparses_identically() {
        let srcs = [
            "dist(a, b) < 0.02 + 0.001 * 2.0",
            "!(contact(thumb, bulb) || contact(index, bulb)) && any_contact(socket)",
            "coord(a, y) >= -0.5 - 1.0 / 2.0",
            "angle_between(a, b, c) < 1.0 && dist_axis(a, b, x) <= 0.1",
        ];
        for src in srcs {
            let e1 = parse(src).unwrap();
            let printed = e1.to_string();
            let e2 = parse(&printed).unwrap();
            assert!(
                e1.structurally_eq(&e2),
                "round-trip failed for '{src}' -> '{printed}'"
            );
        }
    }
}
