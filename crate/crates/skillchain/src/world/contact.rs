//! Contact detection and impulse-based resolution.
//!
//! Robot links are kinematic: they carry velocity into the relative-velocity
//! terms but have zero inverse mass, so impulses move only the objects.

use super::body::BodyState;
use super::robot::LinkId;
use crate::geom::{self, Pose2, Shape, Vec2};
use serde::{Deserialize, Serialize};

/// Reference to one side of a contact: a world object (by index) or a robot link.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BodyRef {
    Object(u32),
    Link(LinkId),
}

impl BodyRef {
    pub fn object_index(self) -> Option<usize> {
        match self {
            BodyRef::Object(i) => Some(i as usize),
            BodyRef::Link(_) => None,
        }
    }
}

/// One resolved contact point from the last step.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
pub struct ContactRecord {
    pub a: BodyRef,
    pub b: BodyRef,
    pub point: Vec2,
    /// Unit normal pointing from `a` toward `b`.
    pub normal: Vec2,
    pub force_magnitude: f64,
}

impl ContactRecord {
    pub fn involves(&self, r: BodyRef) -> bool {
        self.a == r || self.b == r
    }
}

/// Velocity-level view of one side of a contact pair.
#[derive(Copy, Clone, Debug)]
pub struct SolverBody {
    pub r#ref: BodyRef,
    pub com: Vec2,
    pub linear: Vec2,
    pub angular: f64,
    pub inv_mass: f64,
    pub inv_inertia: f64,
    pub friction: f64,
    pub restitution: f64,
}

impl SolverBody {
    pub fn from_object(idx: usize, b: &BodyState) -> SolverBody {
        SolverBody {
            r#ref: BodyRef::Object(idx as u32),
            com: b.pose.pos,
            linear: b.vel.linear,
            angular: b.vel.angular,
            inv_mass: b.inv_mass(),
            inv_inertia: b.inv_inertia(),
            friction: b.material.friction,
            restitution: b.material.restitution,
        }
    }

    pub fn kinematic_link(id: LinkId, pose: Pose2, linear: Vec2, angular: f64, friction: f64) -> SolverBody {
        SolverBody {
            r#ref: BodyRef::Link(id),
            com: pose.pos,
            linear,
            angular,
            inv_mass: 0.0,
            inv_inertia: 0.0,
            friction,
            restitution: 0.0,
        }
    }

    fn velocity_at(&self, point: Vec2) -> Vec2 {
        self.linear + (point - self.com).perp() * self.angular
    }
}

struct ConstraintPoint {
    r_a: Vec2,
    r_b: Vec2,
    point: Vec2,
    normal_mass: f64,
    tangent_mass: f64,
    bias: f64,
    normal_impulse: f64,
    tangent_impulse: f64,
}

/// A contact pair prepared for the solver. Dynamics indices may be mapped to
/// an attachment-chain root while the record refs keep naming the touching
/// bodies themselves.
pub struct ContactConstraint {
    pub a: usize,
    pub b: usize,
    pub record_a: BodyRef,
    pub record_b: BodyRef,
    pub normal: Vec2,
    friction: f64,
    points: Vec<ConstraintPoint>,
}

pub struct SolverParams {
    pub dt: f64,
    pub iterations: usize,
    /// Penetration allowed before position stabilization kicks in.
    pub slop: f64,
    pub baumgarte: f64,
    /// Approach speed below which restitution is ignored.
    pub restitution_threshold: f64,
}

/// Build a constraint from a geometric manifold between bodies `a` and `b`
/// (indices into the solver body array; normal must point a -> b).
pub fn prepare_constraint(
    bodies: &[SolverBody],
    a: usize,
    b: usize,
    manifold: &geom::Manifold,
    params: &SolverParams,
) -> ContactConstraint {
    prepare_constraint_mapped(bodies, a, b, bodies[a].r#ref, bodies[b].r#ref, manifold, params)
}

/// `prepare_constraint` with explicit record refs for composite bodies.
pub fn prepare_constraint_mapped(
    bodies: &[SolverBody],
    a: usize,
    b: usize,
    record_a: BodyRef,
    record_b: BodyRef,
    manifold: &geom::Manifold,
    params: &SolverParams,
) -> ContactConstraint {
    let (ba, bb) = (&bodies[a], &bodies[b]);
    let normal = manifold.normal;
    let tangent = normal.perp();
    let friction = (ba.friction * bb.friction).sqrt();
    let restitution = ba.restitution.max(bb.restitution);

    let points = manifold
        .points
        .iter()
        .map(|cp| {
            let r_a = cp.point - ba.com;
            let r_b = cp.point - bb.com;
            let kn = ba.inv_mass
                + bb.inv_mass
                + ba.inv_inertia * r_a.cross(normal).powi(2)
                + bb.inv_inertia * r_b.cross(normal).powi(2);
            let kt = ba.inv_mass
                + bb.inv_mass
                + ba.inv_inertia * r_a.cross(tangent).powi(2)
                + bb.inv_inertia * r_b.cross(tangent).powi(2);
            let v_rel = bb.velocity_at(cp.point) - ba.velocity_at(cp.point);
            let vn = v_rel.dot(normal);
            let mut bias =
                params.baumgarte / params.dt * (cp.depth - params.slop).max(0.0);
            if vn < -params.restitution_threshold {
                bias = bias.max(-restitution * vn);
            }
            ConstraintPoint {
                r_a,
                r_b,
                point: cp.point,
                normal_mass: if kn > 0.0 { 1.0 / kn } else { 0.0 },
                tangent_mass: if kt > 0.0 { 1.0 / kt } else { 0.0 },
                bias,
                normal_impulse: 0.0,
                tangent_impulse: 0.0,
            }
        })
        .collect();

    ContactConstraint {
        a,
        b,
        record_a,
        record_b,
        normal,
        friction,
        points,
    }
}

/// Run sequential impulse iterations over all constraints, mutating body
/// velocities in place.
pub fn solve(bodies: &mut [SolverBody], constraints: &mut [ContactConstraint], iterations: usize) {
    for _ in 0..iterations {
        for c in constraints.iter_mut() {
            let tangent = c.normal.perp();
            for p in c.points.iter_mut() {
                // Sequential impulse, normal then friction.
                let (va, vb) = (
                    bodies[c.a].linear + p.r_a.perp() * bodies[c.a].angular,
                    bodies[c.b].linear + p.r_b.perp() * bodies[c.b].angular,
                );
                let v_rel = vb - va;
                let vn = v_rel.dot(c.normal);
                let dl = (p.bias - vn) * p.normal_mass;
                let new_impulse = (p.normal_impulse + dl).max(0.0);
                let applied = new_impulse - p.normal_impulse;
                p.normal_impulse = new_impulse;
                apply_impulse(bodies, c.a, c.b, c.normal * applied, p.r_a, p.r_b);

                let (va, vb) = (
                    bodies[c.a].linear + p.r_a.perp() * bodies[c.a].angular,
                    bodies[c.b].linear + p.r_b.perp() * bodies[c.b].angular,
                );
                let vt = (vb - va).dot(tangent);
                let dl_t = -vt * p.tangent_mass;
                let max_f = c.friction * p.normal_impulse;
                let new_t = (p.tangent_impulse + dl_t).clamp(-max_f, max_f);
                let applied_t = new_t - p.tangent_impulse;
                p.tangent_impulse = new_t;
                apply_impulse(bodies, c.a, c.b, tangent * applied_t, p.r_a, p.r_b);
            }
        }
    }
}

fn apply_impulse(bodies: &mut [SolverBody], a: usize, b: usize, impulse: Vec2, r_a: Vec2, r_b: Vec2) {
    let ba = &mut bodies[a];
    ba.linear -= impulse * ba.inv_mass;
    ba.angular -= r_a.cross(impulse) * ba.inv_inertia;
    let bb = &mut bodies[b];
    bb.linear += impulse * bb.inv_mass;
    bb.angular += r_b.cross(impulse) * bb.inv_inertia;
}

/// Convert solved constraints into per-point contact records.
pub fn records(bodies: &[SolverBody], constraints: &[ContactConstraint], dt: f64) -> Vec<ContactRecord> {
    let mut out = Vec::new();
    let _ = bodies;
    for c in constraints {
        for p in &c.points {
            out.push(ContactRecord {
                a: c.record_a,
                b: c.record_b,
                point: p.point,
                normal: c.normal,
                force_magnitude: p.normal_impulse.max(0.0) / dt,
            });
        }
    }
    out
}

/// Geometric overlap test at a margin, used for projection and audits.
pub fn shapes_overlap(sa: &Shape, pa: Pose2, sb: &Shape, pb: Pose2, margin: f64) -> Option<f64> {
    geom::contact(sa, pa, sb, pb, margin).and_then(|m| {
        let depth = m.points.iter().map(|p| p.depth).fold(f64::NEG_INFINITY, f64::max);
        (depth > -margin).then_some(depth)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec2;

    #[test]
    fn head_on_collision_conserves_momentum() {
        let a = BodyState::new_dynamic(Shape::circle(0.1), 100.0, crate::geom::pose2(-0.09, 0.0, 0.0));
        let mut b = BodyState::new_dynamic(Shape::circle(0.1), 100.0, crate::geom::pose2(0.09, 0.0, 0.0));
        b.vel.linear = vec2(-1.0, 0.0);
        let mut solver_bodies = vec![SolverBody::from_object(0, &a), SolverBody::from_object(1, &b)];
        let params = SolverParams {
            dt: 0.01,
            iterations: 4,
            slop: 0.0005,
            baumgarte: 0.2,
            restitution_threshold: 0.2,
        };
        let m = geom::contact(&a.shape, a.pose, &b.shape, b.pose, 0.0).unwrap();
        let mut cs = vec![prepare_constraint(&solver_bodies, 0, 1, &m, &params)];
        let p_before = solver_bodies[0].linear * a.mass + solver_bodies[1].linear * b.mass;
        solve(&mut solver_bodies, &mut cs, 4);
        let p_after = solver_bodies[0].linear * a.mass + solver_bodies[1].linear * b.mass;
        assert!((p_before - p_after).norm() < 1e-9);
        // Separating after resolution.
        assert!(solver_bodies[1].linear.x - solver_bodies[0].linear.x >= -1e-9);
    }
}
