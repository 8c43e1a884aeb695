//! Expression evaluation over a single frame.

use super::ast::{Axis, BinOp, Expr, ExprKind};
use super::EvalError;
use crate::geom::Vec2;
use crate::world::{BodyRef, ContactRecord, Finger};
use serde::{Deserialize, Serialize};

/// Everything an expression can see at one frame: tracked keypoints (world
/// frame), the step's contact records, and the fingertip link mapping.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FrameContext {
    /// Keypoint name -> world position, in template order.
    pub keypoints: Vec<(String, Vec2)>,
    pub contacts: Vec<ContactRecord>,
    /// Object name -> body index, as used by `ContactRecord::Object`.
    pub objects: Vec<(String, u32)>,
    pub contact_force_threshold: f64,
}

impl FrameContext {
    pub fn keypoint(&self, name: &str) -> Option<Vec2> {
        self.keypoints
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| *p)
    }

    pub fn object_index(&self, name: &str) -> Option<u32> {
        self.objects
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, i)| *i)
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(f64),
    Boolean(bool),
}

impl Value {
    fn scalar(self) -> f64 {
        match self {
            Value::Scalar(v) => v,
            Value::Boolean(_) => unreachable!("typecheck guarantees scalar"),
        }
    }

    fn boolean(self) -> bool {
        match self {
            Value::Boolean(v) => v,
            Value::Scalar(_) => unreachable!("typecheck guarantees boolean"),
        }
    }
}

/// Evaluate a typechecked expression. Pure: the frame is never mutated and
/// identical inputs give identical results.
pub fn eval_expr(expr: &Expr, frame: &FrameContext) -> Result<Value, EvalError> {
    match &expr.kind {
        ExprKind::Number(n) => Ok(Value::Scalar(*n)),
        ExprKind::BoolLit(b) => Ok(Value::Boolean(*b)),
        ExprKind::Dist(a, b) => {
            let (pa, pb) = (kp(frame, &a.name)?, kp(frame, &b.name)?);
            Ok(Value::Scalar(pa.dist(pb)))
        }
        ExprKind::DistAxis(a, b, axis) => {
            let (pa, pb) = (kp(frame, &a.name)?, kp(frame, &b.name)?);
            let d = match axis {
                Axis::X => (pa.x - pb.x).abs(),
                Axis::Y => (pa.y - pb.y).abs(),
            };
            Ok(Value::Scalar(d))
        }
        ExprKind::AngleBetween(a, b, c) => {
            let (pa, pb, pc) = (kp(frame, &a.name)?, kp(frame, &b.name)?, kp(frame, &c.name)?);
            let u = pa - pb;
            let v = pc - pb;
            let nu = u.norm();
            let nv = v.norm();
            if nu == 0.0 || nv == 0.0 {
                return Ok(Value::Scalar(0.0));
            }
            Ok(Value::Scalar((u.dot(v) / (nu * nv)).clamp(-1.0, 1.0).acos()))
        }
        ExprKind::Coord(a, axis) => {
            let p = kp(frame, &a.name)?;
            Ok(Value::Scalar(match axis {
                Axis::X => p.x,
                Axis::Y => p.y,
            }))
        }
        ExprKind::Contact(f, o) => {
            let finger = Finger::from_name(&f.name).ok_or_else(|| EvalError::UnknownIdentifier {
                name: f.name.clone(),
            })?;
            let obj = frame
                .object_index(&o.name)
                .ok_or_else(|| EvalError::UnknownIdentifier { name: o.name.clone() })?;
            let tip = BodyRef::Link(finger.tip_link());
            let hit = frame.contacts.iter().any(|c| {
                c.involves(tip)
                    && c.involves(BodyRef::Object(obj))
                    && c.force_magnitude > frame.contact_force_threshold
            });
            Ok(Value::Boolean(hit))
        }
        ExprKind::AnyContact(o) => {
            let obj = frame
                .object_index(&o.name)
                .ok_or_else(|| EvalError::UnknownIdentifier { name: o.name.clone() })?;
            let hit = frame.contacts.iter().any(|c| {
                c.involves(BodyRef::Object(obj))
                    && c.force_magnitude > frame.contact_force_threshold
            });
            Ok(Value::Boolean(hit))
        }
        ExprKind::Not(e) => Ok(Value::Boolean(!eval_expr(e, frame)?.boolean())),
        ExprKind::Neg(e) => Ok(Value::Scalar(-eval_expr(e, frame)?.scalar())),
        ExprKind::Bin(op, a, b) => {
            match op {
                // Short-circuiting boolean ops.
                BinOp::And => {
                    let va = eval_expr(a, frame)?.boolean();
                    if !va {
                        return Ok(Value::Boolean(false));
                    }
                    Ok(Value::Boolean(eval_expr(b, frame)?.boolean()))
                }
                BinOp::Or => {
                    let va = eval_expr(a, frame)?.boolean();
                    if va {
                        return Ok(Value::Boolean(true));
                    }
                    Ok(Value::Boolean(eval_expr(b, frame)?.boolean()))
                }
                _ => {
                    let va = eval_expr(a, frame)?.scalar();
                    let vb = eval_expr(b, frame)?.scalar();
                    Ok(match op {
                        BinOp::Add => Value::Scalar(va + vb),
                        BinOp::Sub => Value::Scalar(va - vb),
                        BinOp::Mul => Value::Scalar(va * vb),
                        BinOp::Div => {
                            if vb == 0.0 {
                                return Err(EvalError::DivisionByZero {
                                    subexpr: expr.to_string(),
                                });
                            }
                            Value::Scalar(va / vb)
                        }
                        BinOp::Lt => Value::Boolean(va < vb),
                        BinOp::Le => Value::Boolean(va <= vb),
                        BinOp::Gt => Value::Boolean(va > vb),
                        BinOp::Ge => Value::Boolean(va >= vb),
                        BinOp::And | BinOp::Or => unreachable!(),
                    })
                }
            }
        }
    }
}

fn kp(frame: &FrameContext, name: &str) -> Result<Vec2, EvalError> {
    frame
        .keypoint(name)
        .ok_or_else(|| EvalError::UnknownIdentifier { name: name.to_string() })
}
